#pragma once

#include <optional>
#include <string>
#include <vector>

#include "momentprop/distribution.hpp"
#include "momentprop/expr.hpp"

// A discrete-time stochastic system x(k+1) = f(x(k), u(k), w(k)) whose
// right-hand sides are mixed trigonometric polynomials, and its rewriting
// as an equivalent linear system over a finite basis of state functionals.

namespace momentprop {

struct SystemSpec {
    SymbolTable table;
    std::vector<SymbolId> states;
    std::vector<MtpExpr> updates;        // aligned with states
    std::vector<Distribution> initial;   // aligned with states, independent

    std::vector<SymbolId> disturbances;
    // per disturbance: one law used at every step, or one law per step
    std::vector<std::vector<Distribution>> noise_laws;

    std::vector<SymbolId> controls;
    // per control: a single value used at every step, or one value per step
    std::vector<std::vector<double>> schedules;

    int horizon = 0;

    const Distribution& noise_law(std::size_t dist_index, int k) const;
    double control_value(std::size_t ctrl_index, int k) const;
    std::optional<std::size_t> state_index(SymbolId s) const;
    std::optional<std::size_t> disturbance_index(SymbolId s) const;
    std::optional<std::size_t> control_index(SymbolId s) const;

    // Throws ValidationError when anything is inconsistent: misaligned
    // vectors, undeclared symbols in updates, short schedules.
    void validate() const;
};

// Substitute a replacement expression for every symbol of g (indexed by the
// symbol id in g's own table; replacements may live in a different table).
// Polynomial powers become powers of the replacement; a trig atom requires
// its symbol's replacement to be affine and goes through the angle-addition
// expansion.  Identity replacements keep the factor's exact structure.
MtpExpr substitute_symbols(const MtpExpr& g, const SymbolTable& names,
                           const std::vector<MtpExpr>& repl);

// substitute_symbols with states replaced by their expressions and every
// other symbol left alone.
MtpExpr compose_states(const MtpExpr& g, const SystemSpec& spec,
                       const std::vector<MtpExpr>& replacement_by_state);

struct AugmentedSystem {
    // owning copy of the system table with one extra symbol per functional
    SymbolTable table;
    // basis functionals: monomials over original state symbols, coef 1
    std::vector<MtpTerm> functionals;
    // the symbol standing for each functional in transition expressions
    std::vector<SymbolId> functional_syms;
    // entries[i][j]: coefficient of functional j in the update of
    // functional i; an expression over disturbance and control symbols
    std::vector<std::vector<MtpExpr>> entries;
    // index of the constant-1 functional when homogenization fired
    std::optional<std::size_t> one_index;

    std::size_t size() const { return functionals.size(); }

    // row i as a single expression sum_j entries[i][j] * functional_sym[j]
    MtpExpr row_expr(std::size_t i) const;
    // the functional as a human-readable string over original state names
    std::string functional_name(std::size_t i) const;
};

// Rewrite the system as a linear transition over a finite functional basis,
// seeding with the target states and growing the basis until closed.
AugmentedSystem close_system(const SystemSpec& spec,
                             const std::vector<SymbolId>& targets,
                             int max_iterations = 50);

}  // namespace momentprop
