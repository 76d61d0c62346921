// Acceptance harness: ten end-to-end criteria, each printing one PASS/FAIL
// line with its runtime.  Tolerances are pinned here, next to the published
// digits they guard.  Cells printed with few decimals are truncated rather
// than rounded, so such cells carry a tolerance of 1.05 units in the last
// printed place; full-precision statements keep their stated tolerance.
// Returns the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "momentprop/baselines.hpp"
#include "momentprop/jet.hpp"
#include "momentprop/monomial.hpp"
#include "momentprop/propagate.hpp"
#include "momentprop/report.hpp"
#include "momentprop/scenario.hpp"
#include "momentprop/system.hpp"
#include "momentprop/trig_moment.hpp"

using namespace momentprop;

namespace {

const TrigMomentEngine engine;

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

void check_cell(std::vector<std::string>& failures, const std::string& label,
                double computed, double want, double tol) {
    if (!(std::fabs(computed - want) <= tol)) {
        failures.push_back(label + ": got " + fmt(computed) + ", want " +
                           fmt(want) + " +/- " + fmt(tol));
    }
}

double table_cell(const MomentTable& t, std::size_t row,
                  const std::string& label) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i] == label) return t.values.at(row).at(i);
    }
    throw ValidationError("no column " + label);
}

// ---- criterion 1: one-step trig moments of a uniform angle ----
std::vector<std::string> criterion1() {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario("example1");
    const MomentTable t = run_method(sc, Method::exact, {}, {}, engine);
    struct Cell { const char* label; double want; double tol; };
    // 4-decimal digits are rounded (tolerance 5e-5); E[c*s] is printed
    // truncated to 3 decimals
    const Cell cells[] = {
        {"E[c]", 0.9589, 5e-5},      {"E[s]", 0.2448, 5e-5},
        {"E[c*s]", 0.229, 1.05e-3},  {"E[c^3]", 0.8854, 5e-5},
        {"E[c^2*s]", 0.2161, 5e-5},  {"E[c*s^2]", 0.0735, 5e-5},
        {"E[s^3]", 0.0287, 5e-5},
    };
    for (const Cell& c : cells) {
        check_cell(failures, c.label, table_cell(t, 1, c.label), c.want, c.tol);
    }
    return failures;
}

// ---- criterion 2: polynomial-trig cross moments ----
std::vector<std::string> criterion2() {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario("example2");
    const MomentTable t = run_method(sc, Method::exact, {}, {}, engine);
    // all three digits strings are truncated 3-decimal prints
    check_cell(failures, "E[p*c]", table_cell(t, 1, "E[p*c]"), 0.234, 1.05e-3);
    check_cell(failures, "E[p*s]", table_cell(t, 1, "E[p*s]"), 0.081, 1.05e-3);
    check_cell(failures, "E[p^2*c*s]", table_cell(t, 1, "E[p^2*c*s]"), 0.027,
               1.05e-3);
    return failures;
}

void collect_flags(std::vector<std::string>& failures,
                   const std::vector<ComparisonTable>& tables) {
    for (const ComparisonTable& t : tables) {
        for (std::size_t r = 0; r < t.cells.size(); ++r) {
            for (std::size_t c = 0; c < t.cells[r].size(); ++c) {
                const ComparisonCell& cell = t.cells[r][c];
                if (!cell.flagged) continue;
                failures.push_back(
                    t.title + " / " + t.row_labels[r] + " / " +
                    t.column_labels[c] + ": got " + fmt(cell.computed) +
                    (cell.reference ? ", published " + fmt(*cell.reference)
                                    : std::string()) +
                    (cell.tolerance ? ", tolerance " + fmt(*cell.tolerance)
                                    : std::string()));
            }
        }
    }
}

// ---- criteria 3 and 4: published method-comparison tables ----
std::vector<std::string> criterion3() {
    std::vector<std::string> failures;
    collect_flags(failures,
                  run_reference_comparison("table1", 1000000, 2026, engine));
    return failures;
}

std::vector<std::string> criterion4() {
    std::vector<std::string> failures;
    collect_flags(failures,
                  run_reference_comparison("table2", 1000000, 2027, engine));
    return failures;
}

// ---- criterion 5: heading random walk, five orders, two methods ----
std::vector<std::string> criterion5() {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario("example5");
    const MomentTable rec = run_method(sc, Method::exact, {}, {}, engine);
    const MomentTable dir = run_method(sc, Method::direct, {}, {}, engine);
    const double want[] = {0.2974, 0.7028, 0.5581, 1.3158, 1.536};
    const std::size_t last = rec.values.size() - 1;
    for (int a = 1; a <= 5; ++a) {
        const std::string label =
            a == 1 ? "E[x]" : "E[x^" + std::to_string(a) + "]";
        const double r = table_cell(rec, last, label);
        check_cell(failures, label, r, want[a - 1], 1e-3);
        check_cell(failures, label + " direct vs recursive",
                   table_cell(dir, 0, label), r, 1e-9);
    }
    return failures;
}

// ---- criterion 6: rimless wheel squared-speed sequences ----
std::vector<std::string> criterion6() {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario("rimless");
    const PropagationResult res =
        propagate_recursive(sc.spec, sc.targets, {1, 2}, engine);
    const std::vector<double> m2 =
        extract_state_moments(res, {{sc.targets[0], 1}});
    const std::vector<double> m4 =
        extract_state_moments(res, {{sc.targets[0], 2}});
    struct Printed { double value; int decimals; };
    const Printed w2[] = {{0, 0},    {2.76, 2}, {4.14, 2}, {4.83, 2},
                          {5.18, 2}, {5.35, 2}, {5.44, 2}, {5.48, 2},
                          {5.50, 2}, {5.51, 2}, {5.52, 2}};
    const Printed w4[] = {{0.003, 3}, {74.5, 1},  {100.7, 1}, {111.1, 1},
                          {115.6, 1}, {117.7, 1}, {118.7, 1}, {119.2, 1},
                          {119.4, 1}, {119.6, 1}, {119.6, 1}};
    for (int k = 0; k <= 10; ++k) {
        const double tol2 =
            std::max(1e-2, 1.05 * std::pow(10.0, -w2[k].decimals));
        check_cell(failures, "m2(" + std::to_string(k) + ")", m2[k],
                   w2[k].value, tol2);
        // relative 1e-3 against the printed value, or one truncated unit
        const double tol4 = std::max(1e-3 * std::fabs(w4[k].value),
                                     1.05 * std::pow(10.0, -w4[k].decimals));
        check_cell(failures, "m4(" + std::to_string(k) + ")", m4[k],
                   w4[k].value, tol4);
    }
    return failures;
}

// ---- criterion 7: arm end-effector moments through order 3 ----
std::vector<std::string> criterion7() {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario("arm");
    const MomentTable t = run_method(sc, Method::exact, {}, {}, engine);
    // all nineteen published values, in the table's column order
    const double want[] = {0.34,  0.001, 1.43,                  // order 1
                           1.12,  0.005, 0.35, 1.004, 0.001, 2.89,  // order 2
                           0.89,  0.004, 1.37, 0.34,  0.006,        // order 3
                           0.66,  0.005, 1.44, 0.003, 6.16};
    if (t.columns.size() != 19) {
        failures.push_back("expected 19 moment columns, found " +
                           std::to_string(t.columns.size()));
        return failures;
    }
    for (std::size_t i = 0; i < 19; ++i) {
        check_cell(failures, t.columns[i], t.values.at(1).at(i), want[i], 1e-2);
    }
    return failures;
}

// ---- criterion 8: sampled validation of the figure-only scenarios ----
std::vector<std::string> criterion8_one(const std::string& name,
                                        std::uint64_t seed) {
    std::vector<std::string> failures;
    const Scenario sc = load_scenario(name);
    const std::vector<int> orders = {1, 2, 3, 4, 5, 6};
    const PropagationResult res =
        propagate_recursive(sc.spec, sc.targets, orders, engine);
    const SampleMomentTrajectory mc =
        monte_carlo(sc.spec, sc.targets, orders, 1000000, seed);
    const int N = sc.spec.horizon;
    const std::vector<int> spot = {1, N / 2, N};
    for (std::size_t ti = 0; ti < sc.targets.size(); ++ti) {
        const std::string tname = sc.spec.table.name(sc.targets[ti]);
        for (const int a : orders) {
            std::vector<int> ks;
            if (a <= 2) {
                for (int k = 0; k <= N; ++k) ks.push_back(k);
            } else {
                ks = spot;
            }
            const std::vector<double> exact =
                extract_state_moments(res, {{sc.targets[ti], a}});
            for (const int k : ks) {
                const double mcv = mc.value_at(k, ti, a - 1);
                const double se = mc.stderr_at(k, ti, a - 1);
                const double tol =
                    std::max(4.0 * se, 1e-12 * std::max(1.0, std::fabs(exact[k])));
                check_cell(failures,
                           name + " E[" + tname + "^" + std::to_string(a) +
                               "](" + std::to_string(k) + ")",
                           exact[k], mcv, tol);
            }
        }
    }
    return failures;
}

// ---- criterion 9: invariant families ----
std::vector<std::string> criterion9() {
    std::vector<std::string> failures;

    // (a) cos^2 + sin^2 propagates to exactly one
    const Scenario unic = parse_scenario_text(
        "[states]\nc s theta\n\n[dynamics]\nc = cos(theta + wt)\n"
        "s = sin(theta + wt)\ntheta = theta + wt\n\n[disturbances]\n"
        "wt = gamma(1, 2)\n\n[initial]\nc = point(1)\ns = point(0)\n"
        "theta = normal(0, 1)\n\n[run]\nhorizon = 6\ntargets = c s\n"
        "orders = 1..2\n",
        "identity-transport");
    const PropagationResult ur =
        propagate_recursive(unic.spec, unic.targets, {2}, engine);
    const std::vector<double> c2 =
        extract_state_moments(ur, {{unic.targets[0], 2}});
    const std::vector<double> s2 =
        extract_state_moments(ur, {{unic.targets[1], 2}});
    for (int k = 1; k <= 6; ++k) {
        check_cell(failures, "E[cos^2+sin^2](" + std::to_string(k) + ")",
                   c2[k] + s2[k], 1.0, 1e-9);
    }

    // (b) variances stay nonnegative beyond rounding
    const Scenario uw = load_scenario("underwater");
    const PropagationResult wr =
        propagate_recursive(uw.spec, uw.targets, {1, 2}, engine);
    for (std::size_t ti = 0; ti < uw.targets.size(); ++ti) {
        const std::vector<double> m1 =
            extract_state_moments(wr, {{uw.targets[ti], 1}});
        const std::vector<double> m2 =
            extract_state_moments(wr, {{uw.targets[ti], 2}});
        for (std::size_t k = 0; k < m1.size(); ++k) {
            const double var = m2[k] - m1[k] * m1[k];
            if (var < -1e-9) {
                failures.push_back("negative variance " + fmt(var) +
                                   " at step " + std::to_string(k));
            }
        }
    }

    // (c) the homogenization row is exactly the identity
    const Scenario aff = parse_scenario_text(
        "[states]\nq\n\n[dynamics]\nq = q + wt\n\n[disturbances]\n"
        "wt = gamma(1, 2)\n\n[initial]\nq = point(0)\n\n[run]\nhorizon = 3\n"
        "orders = 1..2\n",
        "affine");
    const AugmentedSystem aug = close_system(aff.spec, aff.targets);
    if (!aug.one_index) {
        failures.push_back("affine dynamics did not homogenize");
    } else {
        for (const int alpha : {1, 2}) {
            const MomentSystem sys =
                build_moment_system(aug, alpha, aff.spec, engine);
            Exponents e(aug.size(), 0);
            e[*aug.one_index] = alpha;
            const std::size_t row = *sys.basis.rank(e);
            const std::vector<double>& A = *sys.step_matrices.front();
            for (std::size_t c = 0; c < sys.dim(); ++c) {
                const double wantv = c == row ? 1.0 : 0.0;
                if (A[row * sys.dim() + c] != wantv) {
                    failures.push_back(
                        "constant row, order " + std::to_string(alpha) +
                        ", column " + std::to_string(c) + ": " +
                        fmt(A[row * sys.dim() + c]));
                }
            }
        }
    }

    // (d) the monomial basis ranks are a bijection
    const MonomialBasis basis(5, 4);
    if (basis.size() != monomial_count(5, 4)) {
        failures.push_back("basis size mismatch for 5 variables, degree 4");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto r = basis.rank(basis[i]);
        if (!r || *r != i) {
            failures.push_back("rank round-trip failed at index " +
                               std::to_string(i));
            break;
        }
    }

    // (e) jet derivatives match finite differences
    const auto g = [](double x) { return std::exp(std::sin(x)); };
    const Jet t = Jet::variable(0.7, 2);
    const Jet f = jet_exp(jet_sin(t));
    const double d1 = f.derivative(1).real();
    const double d2 = f.derivative(2).real();
    const double h1 = 1e-5, h2 = 1e-3;
    const double fd1 = (g(0.7 + h1) - g(0.7 - h1)) / (2.0 * h1);
    const double fd2 = (g(0.7 + h2) - 2.0 * g(0.7) + g(0.7 - h2)) / (h2 * h2);
    if (std::fabs(d1 - fd1) > 1e-6 * std::fabs(fd1)) {
        failures.push_back("first jet derivative " + fmt(d1) + " vs " +
                           fmt(fd1));
    }
    if (std::fabs(d2 - fd2) > 1e-6 * std::fabs(fd2)) {
        failures.push_back("second jet derivative " + fmt(d2) + " vs " +
                           fmt(fd2));
    }

    // (f) mixed trig moments agree with direct quadrature
    const auto simpson = [](const std::function<double(double)>& f, double a,
                            double b, int n) {
        const double h = (b - a) / n;
        double acc = f(a) + f(b);
        for (int i = 1; i < n; ++i) {
            acc += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
        }
        return acc * h / 3.0;
    };
    {
        const Distribution u = Distribution::uniform(0.2, 1.1);
        const double got = engine.moment(u, 2, 1.3, 0.4, 1, 2);
        const double ref = simpson(
            [](double x) {
                const double y = 1.3 * x + 0.4;
                return x * x * std::cos(y) * std::sin(y) * std::sin(y) /
                       (1.1 - 0.2);
            },
            0.2, 1.1, 20000);
        check_cell(failures, "uniform quadrature oracle", got, ref, 1e-7);
    }
    {
        const Distribution gm = Distribution::gamma(2.0, 0.5);
        const double got = engine.moment(gm, 1, 0.9, 0.2, 2, 1);
        const double ref = simpson(
            [](double x) {
                const double y = 0.9 * x + 0.2;
                return 4.0 * x * std::exp(-2.0 * x) * x * std::cos(y) *
                       std::cos(y) * std::sin(y);
            },
            0.0, 25.0, 50000);
        check_cell(failures, "gamma quadrature oracle", got, ref, 1e-7);
    }
    return failures;
}

// ---- criterion 10: assembled-system sizes and propagation speed ----
std::vector<std::string> criterion10() {
    std::vector<std::string> failures;
    using clock = std::chrono::steady_clock;
    const Scenario sc = load_scenario("aerial3d");

    const auto t0 = clock::now();
    const AugmentedSystem aug = close_system(sc.spec, sc.targets);
    std::vector<MomentSystem> systems;
    std::vector<std::vector<double>> initials;
    for (int a = 1; a <= 6; ++a) {
        systems.push_back(build_moment_system(aug, a, sc.spec, engine));
        initials.push_back(
            initial_moment_vector(aug, systems.back().basis, sc.spec, engine));
    }
    const double build_s =
        std::chrono::duration<double>(clock::now() - t0).count();

    if (aug.size() != 9) {
        failures.push_back("expected a 9-functional augmented system, found " +
                           std::to_string(aug.size()));
    }
    if (build_s >= 60.0) {
        failures.push_back("construction took " + fmt(build_s) + " s");
    }

    const auto t1 = clock::now();
    double sink = 0.0;
    for (std::size_t si = 0; si < systems.size(); ++si) {
        const MomentSystem& sys = systems[si];
        const std::size_t dim = sys.dim();
        std::vector<double> m = initials[si], next(dim, 0.0);
        for (int k = 0; k < sc.spec.horizon; ++k) {
            const std::vector<double>& A = *sys.step_matrices[k];
            for (std::size_t r = 0; r < dim; ++r) {
                double acc = 0.0;
                const double* row = A.data() + r * dim;
                for (std::size_t c = 0; c < dim; ++c) acc += row[c] * m[c];
                next[r] = acc;
            }
            m.swap(next);
        }
        sink += m[0];
    }
    const double prop_s =
        std::chrono::duration<double>(clock::now() - t1).count();
    if (!(sink == sink)) failures.push_back("propagation produced NaN");
    if (prop_s >= 0.1) {
        failures.push_back("recursive propagation took " + fmt(prop_s) +
                           " s for all orders");
    }
    std::printf("    construction %.2f s, propagation of all orders %.4f s\n",
                build_s, prop_s);
    return failures;
}

struct CriterionRun {
    const char* label;
    double budget_s;  // 0 means no stated budget
    std::function<std::vector<std::string>()> run;
};

}  // namespace

int main() {
    const std::vector<CriterionRun> criteria = {
        {"one-step trig moments match published digits", 1.0, criterion1},
        {"polynomial-trig cross moments match published digits", 1.0,
         criterion2},
        {"polar-transform table reproduced, all methods", 120.0, criterion3},
        {"cubic-map table reproduced, all methods", 60.0, criterion4},
        {"heading walk orders 1-5, direct equals recursive", 30.0, criterion5},
        {"rimless wheel moment sequences", 5.0, criterion6},
        {"arm end-effector moments through order 3", 10.0, criterion7},
        {"sampled validation of five vehicle scenarios", 0.0, nullptr},
        {"invariant families hold", 0.0, criterion9},
        {"offline construction fast, propagation under 100 ms", 60.0,
         criterion10},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const CriterionRun& c = criteria[i];
        std::vector<std::string> failures;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            if (i == 7) {
                // five scenarios, each with its own three-minute budget
                const std::pair<const char*, std::uint64_t> runs[] = {
                    {"underwater", 101}, {"ground", 102},
                    {"planar_aerial", 103}, {"aerial3d", 104},
                    {"diffdrive", 105}};
                for (const auto& [name, seed] : runs) {
                    const auto s0 = std::chrono::steady_clock::now();
                    const std::vector<std::string> f = criterion8_one(name, seed);
                    const double s = std::chrono::duration<double>(
                                         std::chrono::steady_clock::now() - s0)
                                         .count();
                    std::printf("    %-14s %6.1f s  %s\n", name, s,
                                f.empty() ? "ok" : "FAIL");
                    failures.insert(failures.end(), f.begin(), f.end());
                    if (s >= 180.0) {
                        failures.push_back(std::string(name) + " took " +
                                           fmt(s) + " s");
                    }
                }
            } else {
                failures = c.run();
            }
        } catch (const std::exception& e) {
            failures.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        if (c.budget_s > 0.0 && elapsed >= c.budget_s) {
            failures.push_back("runtime " + fmt(elapsed) + " s exceeds " +
                               fmt(c.budget_s) + " s");
        }
        const bool pass = failures.empty();
        failed += pass ? 0 : 1;
        std::printf("criterion %2zu: %s (%.2f s) %s\n", i + 1,
                    pass ? "PASS" : "FAIL", elapsed, c.label);
        for (const std::string& f : failures) {
            std::printf("    %s\n", f.c_str());
        }
    }
    std::printf("acceptance: %zu/%zu criteria passed\n",
                criteria.size() - static_cast<std::size_t>(failed),
                criteria.size());
    return failed;
}
