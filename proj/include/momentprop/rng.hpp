#pragma once

#include <cstdint>
#include <cmath>

// Deterministic random number generation for the Monte Carlo baseline.
//
// Engine: xoshiro256++ (Blackman & Vigna, public domain), state seeded with
// splitmix64.  Streams are derived from a root seed and a stream index:
//
//     stream_seed = splitmix64_mix(root ^ (0x9E3779B97F4A7C15 * (index + 1)))
//
// and the four engine words are the first four splitmix64 outputs of that
// stream seed.  Simulations assign one stream per sample index, so results
// do not depend on how samples are divided between worker threads.

namespace momentprop {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t root_seed, std::uint64_t stream_index = 0) {
        std::uint64_t sm = root_seed ^ (0x9E3779B97F4A7C15ULL * (stream_index + 1));
        for (auto& w : s_) w = splitmix64_next(sm);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Standard normal via the Box-Muller pair transform.  The second member
    // of the pair is discarded so that one draw always consumes exactly two
    // uniforms, keeping the stream layout independent of call history.
    double standard_normal() {
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    double normal(double mean, double variance) {
        return mean + std::sqrt(variance) * standard_normal();
    }

    // Marsaglia-Tsang squeeze method.  Shapes below one use the boost
    // G(a) = G(a+1) * U^(1/a).
    double gamma(double shape, double scale) {
        if (shape < 1.0) {
            double u = next_double();
            while (u <= 0.0) u = next_double();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = standard_normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
                return d * v * scale;
            }
        }
    }

    double beta(double a, double b) {
        const double x = gamma(a, 1.0);
        const double y = gamma(b, 1.0);
        return x / (x + y);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4];
};

}  // namespace momentprop
