#pragma once

#include <cstdint>
#include <shared_mutex>
#include <unordered_map>

#include "momentprop/distribution.hpp"

// Exact mixed polynomial-trigonometric moments of a scalar law, computed from
// derivatives of its characteristic function.
//
// Writing y = s X + phi, the pointwise identity
//
//   cos^c(y) sin^q(y) = 2^-(c+q) i^-q sum_{k1<=c} sum_{k2<=q}
//                       C(c,k1) C(q,k2) (-1)^(q-k2) e^{i g y},
//   g = 2 (k1 + k2) - c - q,
//
// reduces E[X^p cos^c(y) sin^q(y)] to CF derivatives Phi^(p)(s g) weighted by
// e^{i phi g}.  The result must be real; a non-negligible imaginary residue
// raises ResidueTooLarge.

namespace momentprop {

class TrigMomentEngine {
public:
    // E[X^p cos^c(s X + phase) sin^q(s X + phase)] with p = poly_pow,
    // c = cos_pow, q = sin_pow.  c = q = 0 recovers the raw moment E[X^p].
    double moment(const Distribution& d, int poly_pow, double scale,
                  double phase, int cos_pow, int sin_pow) const;

    // Memoized CF jet at a point; safe for concurrent callers.
    Jet cf_jet(const Distribution& d, double t, int order) const;

private:
    struct Key {
        std::uint64_t law;
        std::uint64_t t_bits;
        int order;
        bool operator==(const Key&) const = default;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const;
    };

    mutable std::shared_mutex mu_;
    mutable std::unordered_map<Key, Jet, KeyHash> cache_;
};

// One-shot evaluation without a cache.
double mixed_trig_moment(const Distribution& d, int poly_pow, double scale,
                         double phase, int cos_pow, int sin_pow);

}  // namespace momentprop
