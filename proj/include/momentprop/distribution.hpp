#pragma once

#include <cstdint>
#include <string>

#include "momentprop/jet.hpp"
#include "momentprop/rng.hpp"

// Scalar probability laws with evaluable characteristic functions.
//
// Supported families: Normal(mean, variance), Uniform(lo, hi), Beta(a, b) on
// [0, 1], Gamma(shape, scale), each optionally wrapped by an affine map
// Y = scale * X + shift (the CF picks up e^{i t shift} Phi(scale t)).
// Normal takes a *variance*, never a standard deviation, and variance zero is
// allowed (point mass).

namespace momentprop {

class Distribution {
public:
    enum class Kind : std::uint8_t { normal, uniform, beta, gamma };

    static Distribution normal(double mean, double variance);
    static Distribution uniform(double lo, double hi);
    static Distribution beta(double a, double b);
    static Distribution gamma(double shape, double scale);

    // Law of scale * X + shift.
    Distribution affine(double scale, double shift) const;

    Kind kind() const { return kind_; }
    double param1() const { return p1_; }
    double param2() const { return p2_; }
    double affine_scale() const { return ascale_; }
    double affine_shift() const { return ashift_; }

    // Taylor coefficients of the characteristic function around t.
    Jet cf_jet(double t, int order) const;

    // E[X^n] obtained as i^{-n} Phi^(n)(0); the imaginary residue must be
    // negligible or ResidueTooLarge is thrown.
    double raw_moment(int n) const;

    double mean() const;
    double variance() const;

    double sample(Rng& rng) const;

    std::string describe() const;

    friend bool operator==(const Distribution& a, const Distribution& b) {
        return a.kind_ == b.kind_ && a.p1_ == b.p1_ && a.p2_ == b.p2_ &&
               a.ascale_ == b.ascale_ && a.ashift_ == b.ashift_;
    }

    std::uint64_t key_hash() const;

private:
    Distribution(Kind k, double p1, double p2) : kind_(k), p1_(p1), p2_(p2) {}

    Jet base_cf_jet(double t, int order) const;

    Kind kind_;
    double p1_ = 0.0;
    double p2_ = 0.0;
    double ascale_ = 1.0;
    double ashift_ = 0.0;
};

}  // namespace momentprop
