#include "momentprop/transform.hpp"

#include <cmath>

namespace momentprop {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r *= double(n - k + j) / double(j);
    return r;
}

}  // namespace

double polar_to_cartesian_moment(const Distribution& radial_noise,
                                 const Distribution& angle_noise, double r_star,
                                 double theta_star, int x_pow, int y_pow,
                                 const TrigMomentEngine& engine) {
    if (x_pow < 0 || y_pow < 0) {
        throw ValidationError("moment orders must be non-negative");
    }
    const int n = x_pow + y_pow;
    double radial = 0.0;
    for (int j = 0; j <= n; ++j) {
        radial += binom(n, j) * std::pow(r_star, n - j) *
                  engine.moment(radial_noise, j, 0.0, 0.0, 0, 0);
    }
    const double angular =
        engine.moment(angle_noise, 0, 1.0, theta_star, x_pow, y_pow);
    return radial * angular;
}

double pushforward_moment(const MtpExpr& f, const SymbolTable& table,
                          const std::vector<const Distribution*>& dist_by_symbol,
                          int order, const TrigMomentEngine& engine) {
    if (order < 1) throw ValidationError("pushforward order must be positive");
    const std::vector<char> keep_none(table.size(), 0);
    const MtpExpr reduced =
        expectation(f.pow(order), table, dist_by_symbol, engine, &keep_none);
    if (reduced.is_zero()) return 0.0;
    return reduced.terms()[0].coef;
}

}  // namespace momentprop
