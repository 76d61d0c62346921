#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "momentprop/scenario.hpp"
#include "momentprop/trig_moment.hpp"

// Tabulated results on top of the propagation engines: moment trajectories
// for one method at a time, side-by-side method comparisons (including the
// two published pushforward studies with their recorded reference digits),
// and a JSON view of the assembled moment-state linear system.

namespace momentprop {

enum class Method { exact, direct, linear, unscented, montecarlo };

const char* method_name(Method m);
// ValidationError on anything but exact|direct|linear|unscented|montecarlo.
Method method_from_name(const std::string& name);

struct RunSettings {
    std::size_t sample_count = 1000000;  // montecarlo rollouts
    std::uint64_t seed = 0;              // montecarlo stream seed
    std::optional<double> kappa;         // unscented scaling, default 3 - n
};

// One method's moment trajectory.  Rows follow `steps`; columns hold the
// moment labels (montecarlo appends one standard-error column per moment).
struct MomentTable {
    std::string scenario;
    Method method = Method::exact;
    std::vector<std::string> columns;
    std::vector<int> steps;
    std::vector<std::vector<double>> values;  // values[row][column]
    std::size_t sample_count = 0;             // montecarlo only
    std::optional<std::uint64_t> seed;        // montecarlo only
};

// exact: every degree-alpha monomial in the targets, alpha ascending, at
// every k.  direct: marginal target moments at the final step only.
// linear/unscented: orders beyond 2 raise ValidationError; cross moments
// come from the propagated mean and covariance.  montecarlo: marginal
// moments with standard errors at every k.
MomentTable run_method(const Scenario& sc, Method method,
                       const std::vector<int>& orders,
                       const RunSettings& settings,
                       const TrigMomentEngine& engine);

// "k,<col>,..." header plus one row per step; shortest round-trip decimals.
std::string render_csv(const MomentTable& t);
std::string render_json(const MomentTable& t);

// One compared value.  `reference` is the published digit string's value
// where one exists; `corrected` replaces it when the published digits are
// known to be off (the note says why).  Statistical cells carry `std_err`,
// and `flagged` marks a cell outside its tolerance (or, for sampled cells,
// more than four standard errors from the exact value).
struct ComparisonCell {
    double computed = 0.0;
    std::optional<double> reference;
    std::optional<double> corrected;
    std::optional<double> tolerance;
    std::optional<double> std_err;
    std::string note;
    bool flagged = false;
};

struct ComparisonTable {
    std::string title;
    std::vector<std::string> row_labels;     // statistics
    std::vector<std::string> column_labels;  // methods
    std::vector<std::vector<ComparisonCell>> cells;  // [row][column]
};

// The published pushforward studies: `which` is "table1" (polar map, three
// noise cases) or "table2" (cubic filter, four noise cases).  One table per
// case, columns linear/unscented/moment/montecarlo, published values and
// their tolerances attached.  Case i samples with seed + i.
std::vector<ComparisonTable> run_reference_comparison(
    const std::string& which, std::size_t sample_count, std::uint64_t seed,
    const TrigMomentEngine& engine);

// Mean and variance of each target at the final step, exact column versus
// linear, unscented, and montecarlo; sampled cells are flagged beyond four
// standard errors from exact.
ComparisonTable run_scenario_comparison(const Scenario& sc,
                                        std::size_t sample_count,
                                        std::uint64_t seed,
                                        const TrigMomentEngine& engine);

std::string render_comparison_text(const ComparisonTable& t);
std::string render_comparison_json(const std::vector<ComparisonTable>& tables);

// The assembled order-alpha moment-state linear system: functional basis,
// monomial layout, initial moments, and per-step matrices as sparse
// triplets (steps sharing a matrix are grouped).
std::string render_moment_system_json(const Scenario& sc, int alpha,
                                      const TrigMomentEngine& engine);

// Write via a temporary file in the same directory plus an atomic rename;
// IoError on any failure.
void atomic_write_file(const std::string& path, const std::string& content);

}  // namespace momentprop
