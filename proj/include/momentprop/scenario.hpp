#pragma once

#include <string>
#include <vector>

#include "momentprop/system.hpp"

// Declarative scenario definitions: a structured text format describing a
// stochastic system plus run settings, a parser with line/column error
// reporting, a canonical serializer whose output re-parses to the same
// model, and a registry of built-in models.
//
// File format, by section:
//
//   [states]         state names, whitespace or comma separated
//   [dynamics]       name = expression          (one per state)
//   [disturbances]   name = distribution        (declares noise symbols)
//   [initial]        name = distribution        (one per state)
//   [controls]       name = schedule            (constant, list, or formula)
//   [run]            horizon = N; targets = names; orders = a..b or list
//
// Expressions use +, -, *, ^ (nonnegative integer powers), division by a
// constant, parentheses, numeric literals, pi, and cos/sin of arguments that
// are affine in symbols.  Distributions are normal(mean, variance),
// uniform(lo, hi), beta(a, b), gamma(shape, scale), or point(value);
// uniform with equal endpoints collapses to a point mass.  Control
// schedules may reference the step index k; they are evaluated per step at
// load time.  '#' starts a comment.

namespace momentprop {

struct Scenario {
    std::string name;
    std::string summary;  // one line for listings; not part of the file format
    SystemSpec spec;
    std::vector<SymbolId> targets;  // states whose moments are reported
    std::vector<int> orders;        // ascending, defaults to 1..6
};

// One expression in the dynamics grammar over the table's symbols.  Errors
// carry "line L, column C" positions, with lines counted from base_line.
MtpExpr parse_dynamics_expression(const std::string& text,
                                  const SymbolTable& table, int base_line = 1);

// One distribution literal; arguments may be constant expressions.
Distribution parse_distribution_text(const std::string& text);

Scenario parse_scenario_text(const std::string& text, const std::string& name);

// Canonical text for a scenario; parse_scenario_text of the result rebuilds
// an equivalent model (formula schedules come back as evaluated lists).
std::string serialize_scenario(const Scenario& sc);

// True when the two scenarios describe the same model: equal state,
// disturbance, and control names in order, structurally equal updates,
// equal laws, schedules, horizon, targets, and orders.
bool scenario_equivalent(const Scenario& a, const Scenario& b);

// A built-in name, or a path to a scenario file.
Scenario load_scenario(const std::string& name_or_path);

struct BuiltinScenario {
    std::string name;
    std::string summary;
};

// Registry of built-in scenarios, in listing order.
const std::vector<BuiltinScenario>& builtin_scenarios();
bool is_builtin_scenario(const std::string& name);
// Scenario text for a built-in; throws ValidationError for unknown names.
const std::string& builtin_scenario_text(const std::string& name);

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

}  // namespace momentprop
