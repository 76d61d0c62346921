#include "momentprop/distribution.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include "momentprop/errors.hpp"

namespace momentprop {

namespace {

constexpr double kResidueTol = 1e-9;
constexpr int kSeriesCap = 500;
constexpr double kSeriesRelTol = 1e-14;

double jet_max_abs(const Jet& j) {
    double m = 0.0;
    for (int k = 0; k <= j.order(); ++k) m = std::max(m, std::abs(j.coeff(k)));
    return m;
}

}  // namespace

Distribution Distribution::normal(double mean, double variance) {
    if (!(variance >= 0.0)) {
        throw ValidationError("normal distribution needs variance >= 0");
    }
    return Distribution(Kind::normal, mean, variance);
}

Distribution Distribution::uniform(double lo, double hi) {
    if (!(hi > lo)) {
        throw ValidationError("uniform distribution needs upper > lower");
    }
    return Distribution(Kind::uniform, lo, hi);
}

Distribution Distribution::beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw ValidationError("beta distribution needs positive shape parameters");
    }
    return Distribution(Kind::beta, a, b);
}

Distribution Distribution::gamma(double shape, double scale) {
    if (!(shape > 0.0) || !(scale > 0.0)) {
        throw ValidationError("gamma distribution needs positive shape and scale");
    }
    return Distribution(Kind::gamma, shape, scale);
}

Distribution Distribution::affine(double scale, double shift) const {
    Distribution d = *this;
    d.ascale_ = ascale_ * scale;
    d.ashift_ = ashift_ * scale + shift;
    return d;
}

Jet Distribution::base_cf_jet(double t, int order) const {
    const Jet::cplx i{0.0, 1.0};
    const Jet T = Jet::variable(t, order);

    switch (kind_) {
        case Kind::normal: {
            // exp(i mu t - sigma^2 t^2 / 2)
            Jet arg = T * (i * p1_) - (T * T) * Jet::cplx{0.5 * p2_, 0.0};
            return jet_exp(arg);
        }
        case Kind::uniform: {
            // e^{i mid t} sinc(half t), mid = (lo+hi)/2, half = (hi-lo)/2
            const double mid = 0.5 * (p1_ + p2_);
            const double half = 0.5 * (p2_ - p1_);
            Jet w = T * Jet::cplx{half, 0.0};
            Jet sinc(order);
            if (std::abs(half * t) <= 0.5) {
                // sum (-1)^n w^{2n} / (2n+1)!
                Jet w2 = w * w;
                Jet term = Jet::constant({1.0, 0.0}, order);
                sinc = term;
                double fact_ratio = 1.0;
                for (int n = 1; n <= 24; ++n) {
                    term = term * w2;
                    fact_ratio /= static_cast<double>(2 * n) * (2 * n + 1);
                    Jet contrib = term * Jet::cplx{(n % 2 == 0) ? fact_ratio : -fact_ratio, 0.0};
                    sinc += contrib;
                    if (jet_max_abs(contrib) < 1e-18 * std::max(1.0, jet_max_abs(sinc))) break;
                }
            } else {
                sinc = jet_sin(w) / w;
            }
            return jet_exp(T * (i * mid)) * sinc;
        }
        case Kind::gamma: {
            // (1 - i scale t)^{-shape}
            Jet base = Jet::constant({1.0, 0.0}, order) - T * (i * p2_);
            return jet_pow(base, -p1_);
        }
        case Kind::beta: {
            // Kummer series 1F1(a; a+b; i t): term ratio (a+n)/((a+b+n)(n+1)) * it
            const double a = p1_;
            const double ab = p1_ + p2_;
            Jet z = T * i;
            Jet term = Jet::constant({1.0, 0.0}, order);
            Jet sum = term;
            int small_streak = 0;
            for (int n = 0; n < kSeriesCap; ++n) {
                term = term * z * Jet::cplx{(a + n) / ((ab + n) * (n + 1)), 0.0};
                const double tmag = jet_max_abs(term);
                if (!std::isfinite(tmag)) {
                    throw SeriesDivergence(
                        "beta characteristic function series overflowed");
                }
                sum += term;
                if (tmag <= kSeriesRelTol * std::max(jet_max_abs(sum), 1e-300)) {
                    if (++small_streak >= 2) return sum;
                } else {
                    small_streak = 0;
                }
            }
            throw SeriesDivergence("beta characteristic function series did not converge");
        }
    }
    throw ValidationError("unknown distribution kind");
}

Jet Distribution::cf_jet(double t, int order) const {
    if (order < 0) throw ValidationError("jet order must be nonnegative");
    if (ascale_ == 1.0 && ashift_ == 0.0) return base_cf_jet(t, order);

    // Phi_Y(t) = e^{i shift t} Phi_X(scale t); rescale the Taylor coefficients.
    Jet inner = base_cf_jet(ascale_ * t, order);
    double pw = 1.0;
    for (int k = 1; k <= order; ++k) {
        pw *= ascale_;
        inner.coeff(k) *= pw;
    }
    const Jet::cplx i{0.0, 1.0};
    Jet phase = jet_exp(Jet::variable(t, order) * (i * ashift_));
    return inner * phase;
}

double Distribution::raw_moment(int n) const {
    if (n < 0) throw ValidationError("raw moment order must be nonnegative");
    const Jet j = cf_jet(0.0, n);
    // i^{-n} = (-i)^n
    Jet::cplx inv_i{1.0, 0.0};
    for (int k = 0; k < n; ++k) inv_i *= Jet::cplx{0.0, -1.0};
    const Jet::cplx m = inv_i * j.derivative(n);
    if (std::abs(m.imag()) > kResidueTol * std::max(1.0, std::abs(m.real()))) {
        throw ResidueTooLarge("raw moment has non-negligible imaginary part");
    }
    return m.real();
}

double Distribution::mean() const {
    double base = 0.0;
    switch (kind_) {
        case Kind::normal: base = p1_; break;
        case Kind::uniform: base = 0.5 * (p1_ + p2_); break;
        case Kind::beta: base = p1_ / (p1_ + p2_); break;
        case Kind::gamma: base = p1_ * p2_; break;
    }
    return ascale_ * base + ashift_;
}

double Distribution::variance() const {
    double base = 0.0;
    switch (kind_) {
        case Kind::normal: base = p2_; break;
        case Kind::uniform: {
            const double w = p2_ - p1_;
            base = w * w / 12.0;
            break;
        }
        case Kind::beta: {
            const double s = p1_ + p2_;
            base = p1_ * p2_ / (s * s * (s + 1.0));
            break;
        }
        case Kind::gamma: base = p1_ * p2_ * p2_; break;
    }
    return ascale_ * ascale_ * base;
}

double Distribution::sample(Rng& rng) const {
    double x = 0.0;
    switch (kind_) {
        case Kind::normal: x = rng.normal(p1_, p2_); break;
        case Kind::uniform: x = rng.uniform(p1_, p2_); break;
        case Kind::beta: x = rng.beta(p1_, p2_); break;
        case Kind::gamma: x = rng.gamma(p1_, p2_); break;
    }
    return ascale_ * x + ashift_;
}

std::string Distribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::normal: os << "normal(mean=" << p1_ << ", var=" << p2_ << ")"; break;
        case Kind::uniform: os << "uniform(" << p1_ << ", " << p2_ << ")"; break;
        case Kind::beta: os << "beta(" << p1_ << ", " << p2_ << ")"; break;
        case Kind::gamma: os << "gamma(shape=" << p1_ << ", scale=" << p2_ << ")"; break;
    }
    if (ascale_ != 1.0 || ashift_ != 0.0) {
        os << " scaled by " << ascale_ << " shifted by " << ashift_;
    }
    return os.str();
}

std::uint64_t Distribution::key_hash() const {
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return h;
    };
    auto bits = [](double d) {
        std::uint64_t u;
        std::memcpy(&u, &d, sizeof u);
        return u;
    };
    std::uint64_t h = static_cast<std::uint64_t>(kind_) + 1;
    h = mix(h, bits(p1_));
    h = mix(h, bits(p2_));
    h = mix(h, bits(ascale_));
    h = mix(h, bits(ashift_));
    return h;
}

}  // namespace momentprop
