#include "momentprop/trig_moment.hpp"

#include <cmath>
#include <cstring>
#include <mutex>
#include <vector>

#include "momentprop/errors.hpp"

namespace momentprop {

namespace {

constexpr double kResidueTol = 1e-9;

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::uint64_t double_bits(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

template <class CfEval>
double trig_moment_impl(int p, double scale, double phase, int c, int q,
                        CfEval&& cf) {
    using cplx = Jet::cplx;
    if (p < 0 || c < 0 || q < 0) {
        throw ValidationError("trig moment powers must be nonnegative");
    }

    // Collapse the double sum by frequency: m = k1 + k2 gives g = 2m - c - q.
    std::vector<double> weight(static_cast<std::size_t>(c + q) + 1, 0.0);
    for (int k1 = 0; k1 <= c; ++k1) {
        for (int k2 = 0; k2 <= q; ++k2) {
            const double sign = ((q - k2) % 2 != 0) ? -1.0 : 1.0;
            weight[static_cast<std::size_t>(k1 + k2)] +=
                binom(c, k1) * binom(q, k2) * sign;
        }
    }

    cplx sum{0.0, 0.0};
    for (int m = 0; m <= c + q; ++m) {
        const double w = weight[static_cast<std::size_t>(m)];
        if (w == 0.0) continue;
        const int g = 2 * m - c - q;
        const Jet j = cf(scale * g, p);
        const double ang = phase * g;
        sum += w * cplx{std::cos(ang), std::sin(ang)} * j.derivative(p);
    }

    // Prefactor 2^-(c+q) i^-(p+q).
    sum *= std::ldexp(1.0, -(c + q));
    switch (((p + q) % 4 + 4) % 4) {
        case 0: break;
        case 1: sum *= cplx{0.0, -1.0}; break;
        case 2: sum *= cplx{-1.0, 0.0}; break;
        case 3: sum *= cplx{0.0, 1.0}; break;
    }

    if (std::abs(sum.imag()) > kResidueTol * std::max(1.0, std::abs(sum.real()))) {
        throw ResidueTooLarge("mixed trig moment has non-negligible imaginary part");
    }
    return sum.real();
}

}  // namespace

std::size_t TrigMomentEngine::KeyHash::operator()(const Key& k) const {
    std::uint64_t h = k.law;
    h ^= k.t_bits + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(k.order) + 0x9E3779B97F4A7C15ULL + (h << 6) +
         (h >> 2);
    return static_cast<std::size_t>(h);
}

Jet TrigMomentEngine::cf_jet(const Distribution& d, double t, int order) const {
    if (t == 0.0) t = 0.0;  // fold -0.0 into +0.0 so the keys agree
    const Key key{d.key_hash(), double_bits(t), order};
    {
        std::shared_lock lk(mu_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    Jet j = d.cf_jet(t, order);
    std::unique_lock lk(mu_);
    return cache_.emplace(key, std::move(j)).first->second;
}

double TrigMomentEngine::moment(const Distribution& d, int poly_pow, double scale,
                                double phase, int cos_pow, int sin_pow) const {
    return trig_moment_impl(poly_pow, scale, phase, cos_pow, sin_pow,
                            [&](double t, int order) { return cf_jet(d, t, order); });
}

double mixed_trig_moment(const Distribution& d, int poly_pow, double scale,
                         double phase, int cos_pow, int sin_pow) {
    return trig_moment_impl(poly_pow, scale, phase, cos_pow, sin_pow,
                            [&](double t, int order) { return d.cf_jet(t, order); });
}

}  // namespace momentprop
