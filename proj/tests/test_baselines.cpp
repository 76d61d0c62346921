#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>
#include <vector>

#include "momentprop/baselines.hpp"
#include "momentprop/propagate.hpp"

using namespace momentprop;

namespace {

constexpr double kPi = 3.14159265358979323846;

// x = (1 + w_r) cos(pi/2 + w_th), y likewise with sin; states start as point
// masses so one step of the system is exactly the measurement map
SystemSpec polar_spec(const Distribution& radial, const Distribution& angle) {
    SystemSpec spec;
    const SymbolId x = spec.table.declare("x", SymbolKind::state);
    const SymbolId y = spec.table.declare("y", SymbolKind::state);
    const SymbolId wr = spec.table.declare("w_r", SymbolKind::disturbance);
    const SymbolId wt = spec.table.declare("w_th", SymbolKind::disturbance);
    spec.states = {x, y};
    const MtpExpr range = MtpExpr::constant(1.0) + MtpExpr::symbol(wr);
    spec.updates = {range * MtpExpr::atom(wt, 1.0, kPi / 2.0, 1, 0),
                    range * MtpExpr::atom(wt, 1.0, kPi / 2.0, 0, 1)};
    spec.initial = {Distribution::normal(0.0, 0.0),
                    Distribution::normal(0.0, 0.0)};
    spec.disturbances = {wr, wt};
    spec.noise_laws = {{radial}, {angle}};
    spec.horizon = 1;
    return spec;
}

// w = 0.9 eta^3 + eta as a one-step system over a point-mass state
SystemSpec cubic_filter_spec(const Distribution& eta_law) {
    SystemSpec spec;
    const SymbolId x = spec.table.declare("x", SymbolKind::state);
    const SymbolId eta = spec.table.declare("eta", SymbolKind::disturbance);
    spec.states = {x};
    spec.updates = {MtpExpr::symbol(eta, 3) * 0.9 + MtpExpr::symbol(eta)};
    spec.initial = {Distribution::normal(0.0, 0.0)};
    spec.disturbances = {eta};
    spec.noise_laws = {{eta_law}};
    spec.horizon = 1;
    return spec;
}

SystemSpec unicycle_heading_spec(int horizon) {
    SystemSpec spec;
    const SymbolId x = spec.table.declare("x", SymbolKind::state);
    const SymbolId th = spec.table.declare("theta", SymbolKind::state);
    const SymbolId v = spec.table.declare("v", SymbolKind::control);
    const SymbolId w = spec.table.declare("w", SymbolKind::disturbance);
    spec.states = {x, th};
    spec.updates = {MtpExpr::symbol(x) +
                        MtpExpr::symbol(v) * MtpExpr::atom(th, 1.0, 0.0, 1, 0),
                    MtpExpr::symbol(th) + MtpExpr::symbol(w)};
    spec.initial = {Distribution::uniform(-0.1, 0.1),
                    Distribution::normal(0.0, 1.0)};
    spec.disturbances = {w};
    spec.noise_laws = {{Distribution::gamma(1.0, 2.0)}};
    spec.controls = {v};
    spec.schedules = {{0.5}};
    spec.horizon = horizon;
    return spec;
}

struct MeanVar2 {
    double ex, ey, vx, vy;
};

// five hand-built sigma points for the diagonal (radial, angular) belief,
// pushed through the polar map with plain library-free arithmetic; two
// dimensions, so the conventional scaling is kappa = 1, n + kappa = 3
MeanVar2 polar_sigma_oracle(double mr, double vr, double mt, double vt) {
    const double dr = std::sqrt(3.0 * vr), dt = std::sqrt(3.0 * vt);
    const std::array<std::array<double, 2>, 5> z = {{{mr, mt},
                                                     {mr + dr, mt},
                                                     {mr - dr, mt},
                                                     {mr, mt + dt},
                                                     {mr, mt - dt}}};
    const std::array<double, 5> w = {1.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0,
                                     1.0 / 6.0, 1.0 / 6.0};
    std::array<std::array<double, 2>, 5> p{};
    for (int i = 0; i < 5; ++i) {
        p[i][0] = (1.0 + z[i][0]) * std::cos(kPi / 2.0 + z[i][1]);
        p[i][1] = (1.0 + z[i][0]) * std::sin(kPi / 2.0 + z[i][1]);
    }
    MeanVar2 r{0.0, 0.0, 0.0, 0.0};
    for (int i = 0; i < 5; ++i) {
        r.ex += w[i] * p[i][0];
        r.ey += w[i] * p[i][1];
    }
    for (int i = 0; i < 5; ++i) {
        r.vx += w[i] * (p[i][0] - r.ex) * (p[i][0] - r.ex);
        r.vy += w[i] * (p[i][1] - r.ey) * (p[i][1] - r.ey);
    }
    return r;
}

// three points for a scalar belief through w = 0.9 eta^3 + eta; kappa = 2
std::array<double, 2> cubic_sigma_oracle(double mu, double var) {
    const double d = std::sqrt(3.0 * var);
    const std::array<double, 3> z = {mu, mu + d, mu - d};
    const std::array<double, 3> w = {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0};
    std::array<double, 3> p{};
    for (int i = 0; i < 3; ++i) p[i] = 0.9 * z[i] * z[i] * z[i] + z[i];
    double mean = 0.0, var_out = 0.0;
    for (int i = 0; i < 3; ++i) mean += w[i] * p[i];
    for (int i = 0; i < 3; ++i) var_out += w[i] * (p[i] - mean) * (p[i] - mean);
    return {mean, var_out};
}

// value within about one unit of the last printed digit, which covers tables
// that truncate instead of round
bool near_printed(double v, double printed, double last_digit) {
    return std::abs(v - printed) < 1.05 * last_digit;
}

}  // namespace

TEST_CASE("moment matched beliefs carry exact means and variances") {
    const Distribution g = Distribution::gamma(2.0, 1.5);
    const Distribution b = Distribution::beta(3.0, 0.1);
    const Distribution u = Distribution::uniform(-2.0, 2.0);
    const GaussianBelief belief = moment_matched_belief({&g, &b, &u});
    REQUIRE(belief.dim() == 3);
    CHECK(belief.mean[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(belief.mean[1] == doctest::Approx(3.0 / 3.1).epsilon(1e-14));
    CHECK(belief.mean[2] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(belief.cov_at(0, 0) == doctest::Approx(4.5).epsilon(1e-14));
    CHECK(belief.cov_at(1, 1) ==
          doctest::Approx(0.3 / (3.1 * 3.1 * 4.1)).epsilon(1e-14));
    CHECK(belief.cov_at(2, 2) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(belief.cov_at(0, 1) == 0.0);
    CHECK(belief.cov_at(2, 0) == 0.0);
}

TEST_CASE("sigma point weights sum to one around the mean") {
    for (std::size_t n : {1u, 2u, 4u, 7u}) {
        GaussianBelief belief;
        belief.mean.assign(n, 0.25);
        belief.cov.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            belief.cov[i * n + i] = 0.5 + 0.1 * static_cast<double>(i);
        }
        const SigmaSet set = make_sigma_points(belief, default_kappa(n));
        REQUIRE(set.points.size() == 2 * n + 1);
        REQUIRE(set.weights.size() == 2 * n + 1);
        double total = 0.0;
        for (double w : set.weights) total += w;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(set.points[0] == belief.mean);
        // the plus and minus offsets cancel pairwise
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t i = 0; i < n; ++i) {
                CHECK(set.points[1 + j][i] + set.points[1 + n + j][i] ==
                      doctest::Approx(2.0 * belief.mean[i]).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("unscented transform recovers the identity map") {
    SymbolTable table;
    const SymbolId a = table.declare("a", SymbolKind::state);
    const SymbolId b = table.declare("b", SymbolKind::state);
    GaussianBelief belief;
    belief.mean = {0.3, -1.2};
    belief.cov = {0.5, 0.2, 0.2, 0.8};
    const std::vector<MtpExpr> outputs = {MtpExpr::symbol(a),
                                          MtpExpr::symbol(b)};
    const GaussianBelief out =
        unscented_transform(table, outputs, {a, b}, belief, default_kappa(2));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(out.mean[i] == doctest::Approx(belief.mean[i]).epsilon(1e-12));
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(out.cov_at(i, j) ==
                  doctest::Approx(belief.cov_at(i, j)).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear and unscented agree exactly on linear dynamics") {
    // x1(k+1) = x1 + 0.5 x2 + w1, x2(k+1) = x2 - x1; after one step the
    // state covariance picks up off-diagonal terms, so the second step
    // exercises the full matrix paths
    SystemSpec spec;
    const SymbolId x1 = spec.table.declare("x1", SymbolKind::state);
    const SymbolId x2 = spec.table.declare("x2", SymbolKind::state);
    const SymbolId w1 = spec.table.declare("w1", SymbolKind::disturbance);
    spec.states = {x1, x2};
    spec.updates = {MtpExpr::symbol(x1) + MtpExpr::symbol(x2) * 0.5 +
                        MtpExpr::symbol(w1),
                    MtpExpr::symbol(x2) - MtpExpr::symbol(x1)};
    spec.initial = {Distribution::normal(1.0, 0.25),
                    Distribution::normal(-0.5, 0.5)};
    spec.disturbances = {w1};
    spec.noise_laws = {{Distribution::normal(0.0, 0.04)}};
    spec.horizon = 2;

    const std::vector<GaussianBelief> lin = linear_trajectory(spec);
    const std::vector<GaussianBelief> ut = unscented_trajectory(spec);
    REQUIRE(lin.size() == 3);
    REQUIRE(ut.size() == 3);

    // dense two-step oracle: m <- A m, P <- A P A^T + Q
    const double A[4] = {1.0, 0.5, -1.0, 1.0};
    double m[2] = {1.0, -0.5};
    double P[4] = {0.25, 0.0, 0.0, 0.5};
    for (int step = 0; step < 2; ++step) {
        const double m0 = A[0] * m[0] + A[1] * m[1];
        const double m1 = A[2] * m[0] + A[3] * m[1];
        m[0] = m0;
        m[1] = m1;
        double AP[4] = {0, 0, 0, 0};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    AP[i * 2 + j] += A[i * 2 + k] * P[k * 2 + j];
                }
            }
        }
        double next[4] = {0, 0, 0, 0};
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                for (int k = 0; k < 2; ++k) {
                    next[i * 2 + j] += AP[i * 2 + k] * A[j * 2 + k];
                }
            }
        }
        next[0] += 0.04;
        for (int i = 0; i < 4; ++i) P[i] = next[i];

        const GaussianBelief& l = lin[step + 1];
        const GaussianBelief& u = ut[step + 1];
        for (int i = 0; i < 2; ++i) {
            CHECK(l.mean[i] == doctest::Approx(m[i]).epsilon(1e-12));
            CHECK(u.mean[i] == doctest::Approx(m[i]).epsilon(1e-12));
            for (int j = 0; j < 2; ++j) {
                CHECK(l.cov_at(i, j) == doctest::Approx(P[i * 2 + j]).epsilon(1e-12));
                CHECK(u.cov_at(i, j) ==
                      doctest::Approx(P[i * 2 + j]).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("polar map with small gaussian noise, linearized row") {
    SystemSpec spec = polar_spec(Distribution::normal(0.0, 0.02 * 0.02),
                                 Distribution::normal(0.0, 0.2 * 0.2));
    const GaussianBelief out = linear_step(spec, initial_state_belief(spec), 0);
    // at the mean the map has gradients (0, -1) for x and (1, 0) for y
    CHECK(out.mean[0] == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(out.mean[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(out.cov_at(0, 0) == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(out.cov_at(1, 1) == doctest::Approx(0.0004).epsilon(1e-12));
    CHECK(near_printed(out.cov_at(0, 0), 0.04, 1e-2));
    CHECK(near_printed(out.cov_at(1, 1), 0.0004, 1e-4));
}

TEST_CASE("polar map with small gaussian noise, unscented row") {
    SystemSpec spec = polar_spec(Distribution::normal(0.0, 0.02 * 0.02),
                                 Distribution::normal(0.0, 0.2 * 0.2));
    const GaussianBelief out =
        unscented_step(spec, initial_state_belief(spec), 0);
    const MeanVar2 want = polar_sigma_oracle(0.0, 0.0004, 0.0, 0.04);
    CHECK(out.mean[0] == doctest::Approx(want.ex).epsilon(1e-12));
    CHECK(out.mean[1] == doctest::Approx(want.ey).epsilon(1e-12));
    CHECK(out.cov_at(0, 0) == doctest::Approx(want.vx).epsilon(1e-12));
    CHECK(out.cov_at(1, 1) == doctest::Approx(want.vy).epsilon(1e-12));
    CHECK(near_printed(out.mean[1], 0.9802, 1e-4));
    CHECK(near_printed(out.cov_at(0, 0), 0.0384, 1e-4));
    CHECK(near_printed(out.cov_at(1, 1), 0.0012, 1e-4));
}

TEST_CASE("polar map with wide gaussian noise, unscented row") {
    SystemSpec spec = polar_spec(Distribution::normal(0.0, 0.09),
                                 Distribution::normal(0.0, 1.0));
    const GaussianBelief out =
        unscented_step(spec, initial_state_belief(spec), 0);
    const MeanVar2 want = polar_sigma_oracle(0.0, 0.09, 0.0, 1.0);
    CHECK(out.mean[1] == doctest::Approx(want.ey).epsilon(1e-12));
    CHECK(out.cov_at(0, 0) == doctest::Approx(want.vx).epsilon(1e-12));
    CHECK(out.cov_at(1, 1) == doctest::Approx(want.vy).epsilon(1e-12));
    CHECK(near_printed(out.mean[1], 0.613, 1e-3));
    CHECK(near_printed(out.cov_at(0, 0), 0.324, 1e-3));
    CHECK(near_printed(out.cov_at(1, 1), 0.389, 1e-3));
}

TEST_CASE("polar map with skewed radial noise, linear and unscented rows") {
    SystemSpec spec = polar_spec(Distribution::beta(3.0, 0.1),
                                 Distribution::uniform(-2.0, 2.0));
    const GaussianBelief belief = initial_state_belief(spec);

    const double mr = 3.0 / 3.1;
    const double vr = 0.3 / (3.1 * 3.1 * 4.1);
    const double vt = 4.0 / 3.0;

    const GaussianBelief lin = linear_step(spec, belief, 0);
    CHECK(lin.mean[1] == doctest::Approx(1.0 + mr).epsilon(1e-12));
    CHECK(lin.cov_at(0, 0) ==
          doctest::Approx((1.0 + mr) * (1.0 + mr) * vt).epsilon(1e-12));
    CHECK(lin.cov_at(1, 1) == doctest::Approx(vr).epsilon(1e-12));
    CHECK(near_printed(lin.mean[1], 1.967, 1e-3));
    CHECK(near_printed(lin.cov_at(0, 0), 5.1627, 1e-4));
    CHECK(near_printed(lin.cov_at(1, 1), 0.0076, 1e-4));

    const GaussianBelief ut = unscented_step(spec, belief, 0);
    const MeanVar2 want = polar_sigma_oracle(mr, vr, 0.0, vt);
    CHECK(ut.mean[1] == doctest::Approx(want.ey).epsilon(1e-12));
    CHECK(ut.cov_at(0, 0) == doctest::Approx(want.vx).epsilon(1e-12));
    CHECK(ut.cov_at(1, 1) == doctest::Approx(want.vy).epsilon(1e-12));
    CHECK(near_printed(ut.mean[1], 1.038, 1e-3));
    CHECK(near_printed(ut.cov_at(0, 0), 1.0672, 1e-4));
    CHECK(near_printed(ut.cov_at(1, 1), 1.7332, 1e-4));
}

TEST_CASE("cubic noise filter, linearized and unscented rows") {
    struct Row {
        Distribution law;
        double lin_mean, lin_var, ut_mean, ut_var;
        double digits;  // magnitude of the last printed digit
    };
    const std::vector<Row> rows = {
        {Distribution::normal(0.0, 0.1), 0.0, 0.10, 0.0, 0.161, 1e-3},
        {Distribution::normal(0.0, 0.5), 0.0, 0.5, 0.0, 2.761, 1e-3},
        {Distribution::uniform(-0.5, 0.5), 0.0, 0.0833, 0.0, 0.125, 1e-3},
        {Distribution::beta(0.75, 0.75), 0.612, 0.2806, 0.747, 0.414, 1e-3},
    };
    for (const Row& row : rows) {
        SystemSpec spec = cubic_filter_spec(row.law);
        const GaussianBelief belief = initial_state_belief(spec);

        const GaussianBelief lin = linear_step(spec, belief, 0);
        const double mu = row.law.mean(), var = row.law.variance();
        const double jac = 2.7 * mu * mu + 1.0;
        CHECK(lin.mean[0] ==
              doctest::Approx(0.9 * mu * mu * mu + mu).epsilon(1e-12));
        CHECK(lin.cov_at(0, 0) == doctest::Approx(jac * jac * var).epsilon(1e-12));
        CHECK(near_printed(lin.mean[0], row.lin_mean, row.digits));
        CHECK(near_printed(lin.cov_at(0, 0), row.lin_var, row.digits));

        const GaussianBelief ut = unscented_step(spec, belief, 0);
        const std::array<double, 2> want = cubic_sigma_oracle(mu, var);
        CHECK(ut.mean[0] == doctest::Approx(want[0]).epsilon(1e-12));
        CHECK(ut.cov_at(0, 0) == doctest::Approx(want[1]).epsilon(1e-12));
        CHECK(near_printed(ut.mean[0], row.ut_mean, row.digits));
        CHECK(near_printed(ut.cov_at(0, 0), row.ut_var, row.digits));
    }
}

TEST_CASE("indefinite covariance is rejected, degenerate is flattened") {
    GaussianBelief bad;
    bad.mean = {0.0, 0.0};
    bad.cov = {1.0, 2.0, 2.0, 1.0};
    CHECK_THROWS_AS(make_sigma_points(bad, default_kappa(2)), CholeskyFailure);

    GaussianBelief flat;
    flat.mean = {1.0, -1.0};
    flat.cov = {1.0, 1.0, 1.0, 1.0};
    const SigmaSet set = make_sigma_points(flat, default_kappa(2));
    double total = 0.0;
    for (double w : set.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
    // rank one: the second factor column is empty, so its points collapse
    // onto the mean
    CHECK(set.points[2] == flat.mean);
    CHECK(set.points[4] == flat.mean);
    CHECK(set.points[1][0] == doctest::Approx(1.0 + std::sqrt(3.0)).epsilon(1e-14));
    CHECK(set.points[1][1] == doctest::Approx(-1.0 + std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("outputs over unknown symbols are reported") {
    SymbolTable table;
    const SymbolId a = table.declare("a", SymbolKind::state);
    const SymbolId b = table.declare("b", SymbolKind::state);
    GaussianBelief belief;
    belief.mean = {0.0};
    belief.cov = {1.0};
    const std::vector<MtpExpr> outputs = {MtpExpr::symbol(a) +
                                          MtpExpr::symbol(b)};
    CHECK_THROWS_AS(linear_transform(table, outputs, {a}, belief),
                    UnboundSymbol);
    CHECK_THROWS_AS(
        unscented_transform(table, outputs, {a}, belief, default_kappa(1)),
        UnboundSymbol);
}

TEST_CASE("monte carlo is a pure function of the seed") {
    SystemSpec spec = unicycle_heading_spec(3);
    const std::vector<SymbolId> targets = {spec.states[0]};
    const SampleMomentTrajectory a = monte_carlo(spec, targets, {1, 2}, 5000, 42);
    const SampleMomentTrajectory b = monte_carlo(spec, targets, {1, 2}, 5000, 42);
    REQUIRE(a.values.size() == b.values.size());
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        CHECK(std::memcmp(a.values[k].data(), b.values[k].data(),
                          a.values[k].size() * sizeof(double)) == 0);
        CHECK(std::memcmp(a.std_errs[k].data(), b.std_errs[k].data(),
                          a.std_errs[k].size() * sizeof(double)) == 0);
    }
    const SampleMomentTrajectory c = monte_carlo(spec, targets, {1, 2}, 5000, 43);
    CHECK(c.value_at(3, 0, 0) != a.value_at(3, 0, 0));
}

TEST_CASE("deterministic systems roll out exactly with zero error") {
    // x(k+1) = x + 1 from a point mass at 2, noise a point mass at 0
    SystemSpec spec;
    const SymbolId x = spec.table.declare("x", SymbolKind::state);
    const SymbolId w = spec.table.declare("w", SymbolKind::disturbance);
    spec.states = {x};
    spec.updates = {MtpExpr::symbol(x) + MtpExpr::symbol(w) +
                    MtpExpr::constant(1.0)};
    spec.initial = {Distribution::normal(2.0, 0.0)};
    spec.disturbances = {w};
    spec.noise_laws = {{Distribution::normal(0.0, 0.0)}};
    spec.horizon = 4;

    const SampleMomentTrajectory mc = monte_carlo(spec, {x}, {1, 2}, 1000, 7);
    for (int k = 0; k <= 4; ++k) {
        const double v = 2.0 + k;
        CHECK(mc.value_at(k, 0, 0) == doctest::Approx(v).epsilon(1e-14));
        CHECK(mc.value_at(k, 0, 1) == doctest::Approx(v * v).epsilon(1e-14));
        CHECK(mc.stderr_at(k, 0, 0) <= 1e-12);
        CHECK(mc.stderr_at(k, 0, 1) <= 1e-12);
    }
}

TEST_CASE("monte carlo matches the exact moments of the heading system") {
    SystemSpec spec = unicycle_heading_spec(3);
    const SymbolId x = spec.states[0];
    TrigMomentEngine engine;
    const PropagationResult exact = propagate_recursive(spec, {x}, {1, 2}, engine);
    const std::vector<double> m1 = extract_state_moments(exact, {{x, 1}});
    const std::vector<double> m2 = extract_state_moments(exact, {{x, 2}});

    const SampleMomentTrajectory mc = monte_carlo(spec, {x}, {1, 2}, 120000, 11);
    for (int k = 0; k <= 3; ++k) {
        CHECK(std::abs(mc.value_at(k, 0, 0) - m1[k]) <=
              4.0 * mc.stderr_at(k, 0, 0) + 1e-9);
        CHECK(std::abs(mc.value_at(k, 0, 1) - m2[k]) <=
              4.0 * mc.stderr_at(k, 0, 1) + 1e-9);
    }
    CHECK(mc.stderr_at(3, 0, 0) > 0.0);
}

TEST_CASE("standard errors shrink like the root of the sample count") {
    SystemSpec spec = unicycle_heading_spec(2);
    const SymbolId x = spec.states[0];
    const SampleMomentTrajectory small = monte_carlo(spec, {x}, {1}, 20000, 5);
    const SampleMomentTrajectory big = monte_carlo(spec, {x}, {1}, 40000, 5);
    const double ratio = big.stderr_at(2, 0, 0) / small.stderr_at(2, 0, 0);
    CHECK(std::abs(ratio - 1.0 / std::sqrt(2.0)) < 0.03);
}

TEST_CASE("monte carlo agrees with the exact polar pushforward") {
    SystemSpec spec = polar_spec(Distribution::normal(0.0, 0.09),
                                 Distribution::normal(0.0, 1.0));
    // closed forms for the wide-noise case: E[y] = e^{-1/2},
    // E[x^2] = (1 + 0.09)(1 - e^{-2})/2
    const double ey = std::exp(-0.5);
    const double ex2 = 1.09 * (1.0 - std::exp(-2.0)) / 2.0;

    const SampleMomentTrajectory mc =
        monte_carlo(spec, {spec.states[0], spec.states[1]}, {1, 2}, 100000, 99);
    CHECK(std::abs(mc.value_at(1, 1, 0) - ey) <= 4.0 * mc.stderr_at(1, 1, 0));
    CHECK(std::abs(mc.value_at(1, 0, 1) - ex2) <= 4.0 * mc.stderr_at(1, 0, 1));
}

TEST_CASE("monte carlo rejects bad inputs") {
    SystemSpec spec = unicycle_heading_spec(2);
    CHECK_THROWS_AS(monte_carlo(spec, {spec.states[0]}, {1}, 1, 3),
                    ValidationError);
    CHECK_THROWS_AS(monte_carlo(spec, {spec.disturbances[0]}, {1}, 100, 3),
                    ValidationError);
    CHECK_THROWS_AS(monte_carlo(spec, {spec.states[0]}, {0}, 100, 3),
                    ValidationError);
}
