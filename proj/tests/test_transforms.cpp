#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "momentprop/transform.hpp"
#include "oracle.hpp"

using namespace momentprop;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Polar {
    Distribution radial;
    Distribution angle;
};

double var_of(const TrigMomentEngine& engine, const Polar& p, bool y_axis) {
    const int xp = y_axis ? 0 : 1, yp = y_axis ? 1 : 0;
    const double m1 =
        polar_to_cartesian_moment(p.radial, p.angle, 1.0, kPi / 2.0, xp, yp, engine);
    const double m2 = polar_to_cartesian_moment(p.radial, p.angle, 1.0, kPi / 2.0,
                                                2 * xp, 2 * yp, engine);
    return m2 - m1 * m1;
}

}  // namespace

TEST_CASE("polar map, tightly dispersed gaussian noises") {
    TrigMomentEngine engine;
    const Polar p{Distribution::normal(0.0, 0.02 * 0.02),
                  Distribution::normal(0.0, 0.2 * 0.2)};

    const double ey =
        polar_to_cartesian_moment(p.radial, p.angle, 1.0, kPi / 2.0, 0, 1, engine);
    const double vx = var_of(engine, p, false);
    const double vy = var_of(engine, p, true);

    // closed forms: E[y] = exp(-vt/2), Var(x) = (1+vr)(1-e^{-2vt})/2,
    // Var(y) = (1+vr)(1+e^{-2vt})/2 - e^{-vt}
    const double vr = 0.0004, vt = 0.04;
    CHECK(ey == doctest::Approx(std::exp(-vt / 2.0)).epsilon(1e-12));
    CHECK(vx ==
          doctest::Approx((1.0 + vr) * (1.0 - std::exp(-2.0 * vt)) / 2.0)
              .epsilon(1e-12));
    CHECK(vy == doctest::Approx((1.0 + vr) * (1.0 + std::exp(-2.0 * vt)) / 2.0 -
                                std::exp(-vt))
                    .epsilon(1e-10));

    // published reference digits
    CHECK(std::abs(ey - 0.9802) <= 1e-4);
    CHECK(std::abs(vx - 0.0385) <= 1e-4);
    CHECK(std::abs(vy - 0.0012) <= 1e-4);
}

TEST_CASE("polar map, skewed radial and wide angular noise") {
    TrigMomentEngine engine;
    const Polar p{Distribution::beta(3.0, 0.1), Distribution::uniform(-2.0, 2.0)};

    const double ey =
        polar_to_cartesian_moment(p.radial, p.angle, 1.0, kPi / 2.0, 0, 1, engine);
    const double vx = var_of(engine, p, false);
    const double vy = var_of(engine, p, true);

    // closed forms from beta raw moments and sin(2)/2, sin(4)/4
    const double m1 = 3.0 / 3.1, m2 = m1 * 4.0 / 4.1;
    const double c1 = std::sin(2.0) / 2.0, c2 = std::sin(4.0) / 4.0;
    const double r2 = 1.0 + 2.0 * m1 + m2;
    CHECK(ey == doctest::Approx((1.0 + m1) * c1).epsilon(1e-10));
    CHECK(vx == doctest::Approx(r2 * (1.0 - c2) / 2.0).epsilon(1e-10));
    CHECK(vy == doctest::Approx(r2 * (1.0 + c2) / 2.0 -
                                (1.0 + m1) * (1.0 + m1) * c1 * c1)
                    .epsilon(1e-10));

    CHECK(std::abs(ey - 0.894) <= 1e-3);
    CHECK(std::abs(vx - 2.3068) <= 1e-4);
    CHECK(std::abs(vy - 0.772) <= 1e-3);
}

TEST_CASE("polar map degenerates to the deterministic point") {
    TrigMomentEngine engine;
    const Distribution zero = Distribution::normal(0.0, 0.0);
    CHECK(std::abs(polar_to_cartesian_moment(zero, zero, 1.0, kPi / 2.0, 1, 0,
                                             engine)) <= 1e-16);
    CHECK(polar_to_cartesian_moment(zero, zero, 1.0, kPi / 2.0, 0, 1, engine) ==
          doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("polar map cross moment against factorized quadrature") {
    TrigMomentEngine engine;
    const Distribution radial = Distribution::gamma(2.0, 0.3);
    const Distribution angle = Distribution::uniform(-0.5, 1.0);
    const double r_star = 0.8, t_star = 0.6;

    const double got = polar_to_cartesian_moment(radial, angle, r_star, t_star,
                                                 2, 1, engine);
    const double rad = oracle::expect(
        radial, [&](double w) { return std::pow(r_star + w, 3); });
    const double ang = oracle::expect(angle, [&](double w) {
        const double a = t_star + w;
        return std::cos(a) * std::cos(a) * std::sin(a);
    });
    CHECK(got == doctest::Approx(rad * ang).epsilon(1e-9));
}

TEST_CASE("cubic pushforward of a centered gaussian") {
    TrigMomentEngine engine;
    SymbolTable table;
    const SymbolId eta = table.declare("eta", SymbolKind::disturbance);
    const Distribution d = Distribution::normal(0.0, 0.5);
    std::vector<const Distribution*> dists{&d};

    MtpExpr f = 0.9 * MtpExpr::symbol(eta, 3) + MtpExpr::symbol(eta);
    const double mean = pushforward_moment(f, table, dists, 1, engine);
    const double second = pushforward_moment(f, table, dists, 2, engine);

    // E[f] = 0 by symmetry; E[f^2] = 0.81 m6 + 1.8 m4 + m2 with gaussian
    // raw moments m2 = v, m4 = 3 v^2, m6 = 15 v^3 at v = 0.5
    const double v = 0.5;
    const double exact = 0.81 * 15.0 * v * v * v + 1.8 * 3.0 * v * v + v;
    CHECK(std::abs(mean) <= 1e-12);
    CHECK(second == doctest::Approx(exact).epsilon(1e-12));
    CHECK(exact == doctest::Approx(3.36875));
    // the published table prints 3.367 for this cell
    CHECK(std::abs(second - 3.367) <= 2e-3);
}

TEST_CASE("cubic pushforward of a symmetric beta") {
    TrigMomentEngine engine;
    SymbolTable table;
    const SymbolId eta = table.declare("eta", SymbolKind::disturbance);
    const Distribution d = Distribution::beta(0.75, 0.75);
    std::vector<const Distribution*> dists{&d};

    MtpExpr f = 0.9 * MtpExpr::symbol(eta, 3) + MtpExpr::symbol(eta);
    const double mean = pushforward_moment(f, table, dists, 1, engine);
    const double second = pushforward_moment(f, table, dists, 2, engine);
    const double var = second - mean * mean;

    double m[7];
    m[0] = 1.0;
    for (int k = 0; k < 6; ++k) m[k + 1] = m[k] * (0.75 + k) / (1.5 + k);
    const double mean_exact = 0.9 * m[3] + m[1];
    const double var_exact =
        0.81 * m[6] + 1.8 * m[4] + m[2] - mean_exact * mean_exact;
    CHECK(mean == doctest::Approx(mean_exact).epsilon(1e-12));
    CHECK(var == doctest::Approx(var_exact).epsilon(1e-12));

    CHECK(std::abs(mean - 0.747) <= 1e-3);
    CHECK(std::abs(var - 0.345) <= 1e-3);
}

TEST_CASE("identity pushforward reproduces raw moments") {
    TrigMomentEngine engine;
    SymbolTable table;
    const SymbolId eta = table.declare("eta", SymbolKind::disturbance);
    const MtpExpr f = MtpExpr::symbol(eta);
    const std::vector<Distribution> laws{
        Distribution::normal(0.4, 1.2), Distribution::uniform(-1.0, 3.0),
        Distribution::gamma(1.5, 2.0), Distribution::beta(2.0, 5.0)};
    for (const auto& d : laws) {
        std::vector<const Distribution*> dists{&d};
        for (int a = 1; a <= 6; ++a) {
            const double got = pushforward_moment(f, table, dists, a, engine);
            CHECK(got == doctest::Approx(d.raw_moment(a)).epsilon(1e-13));
        }
    }
}

TEST_CASE("pushforward with trig content against quadrature") {
    TrigMomentEngine engine;
    SymbolTable table;
    const SymbolId eta = table.declare("eta", SymbolKind::disturbance);
    const Distribution d = Distribution::normal(0.3, 0.6);
    std::vector<const Distribution*> dists{&d};

    MtpExpr f = MtpExpr::symbol(eta) * MtpExpr::atom(eta, 1.0, 0.0, 1, 0) +
                0.5 * MtpExpr::atom(eta, 2.0, 0.5, 0, 1);
    for (int a = 1; a <= 3; ++a) {
        const double got = pushforward_moment(f, table, dists, a, engine);
        const double want = oracle::expect(d, [&](double w) {
            const double v = w * std::cos(w) + 0.5 * std::sin(2.0 * w + 0.5);
            return std::pow(v, a);
        });
        CHECK(got == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("pushforward validation") {
    TrigMomentEngine engine;
    SymbolTable table;
    const SymbolId eta = table.declare("eta", SymbolKind::disturbance);
    const SymbolId st = table.declare("s", SymbolKind::state);
    const Distribution d = Distribution::normal(0.0, 1.0);
    std::vector<const Distribution*> dists{&d, nullptr};

    CHECK_THROWS_AS(pushforward_moment(MtpExpr::symbol(eta), table, dists, 0,
                                       engine),
                    ValidationError);
    CHECK_THROWS_AS(pushforward_moment(MtpExpr::symbol(st), table, dists, 1,
                                       engine),
                    UnboundSymbol);
}
