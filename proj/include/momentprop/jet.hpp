#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

#include "momentprop/errors.hpp"

// Truncated complex Taylor series ("jets") used to carry characteristic
// functions together with their derivatives through closed-form evaluation.
// A Jet stores coefficients c_j = f^(j)(t0)/j! for j = 0..order.

namespace momentprop {

class Jet {
public:
    using cplx = std::complex<double>;

    Jet() = default;
    explicit Jet(int order) : c_(static_cast<std::size_t>(order) + 1, cplx{0.0, 0.0}) {}

    static Jet constant(cplx value, int order) {
        Jet j(order);
        j.c_[0] = value;
        return j;
    }

    // The identity function t evaluated around t0.
    static Jet variable(double t0, int order) {
        Jet j(order);
        j.c_[0] = cplx{t0, 0.0};
        if (order >= 1) j.c_[1] = cplx{1.0, 0.0};
        return j;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    cplx coeff(int k) const { return c_[static_cast<std::size_t>(k)]; }
    cplx& coeff(int k) { return c_[static_cast<std::size_t>(k)]; }
    cplx value() const { return c_[0]; }

    // f^(k)(t0) = k! * c_k
    cplx derivative(int k) const {
        double fact = 1.0;
        for (int i = 2; i <= k; ++i) fact *= i;
        return c_[static_cast<std::size_t>(k)] * fact;
    }

    Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    Jet& operator*=(cplx s) {
        for (auto& x : c_) x *= s;
        return *this;
    }

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator*(cplx s, Jet a) { return a *= s; }

    friend Jet operator*(const Jet& a, const Jet& b) {
        Jet r(a.order());
        const int d = a.order();
        for (int i = 0; i <= d; ++i) {
            if (a.c_[static_cast<std::size_t>(i)] == cplx{0.0, 0.0}) continue;
            for (int j = 0; i + j <= d; ++j) {
                r.c_[static_cast<std::size_t>(i + j)] +=
                    a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
            }
        }
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) {
        if (b.value() == cplx{0.0, 0.0}) {
            throw ValidationError("jet division by a series with zero constant term");
        }
        const int d = a.order();
        Jet r(d);
        for (int k = 0; k <= d; ++k) {
            cplx s = a.c_[static_cast<std::size_t>(k)];
            for (int j = 1; j <= k; ++j) {
                s -= b.c_[static_cast<std::size_t>(j)] * r.c_[static_cast<std::size_t>(k - j)];
            }
            r.c_[static_cast<std::size_t>(k)] = s / b.c_[0];
        }
        return r;
    }

private:
    std::vector<cplx> c_;
};

inline Jet jet_exp(const Jet& a) {
    const int d = a.order();
    Jet r(d);
    r.coeff(0) = std::exp(a.coeff(0));
    for (int k = 1; k <= d; ++k) {
        Jet::cplx s{0.0, 0.0};
        for (int j = 1; j <= k; ++j) {
            s += static_cast<double>(j) * a.coeff(j) * r.coeff(k - j);
        }
        r.coeff(k) = s / static_cast<double>(k);
    }
    return r;
}

inline Jet jet_log(const Jet& a) {
    if (a.value() == Jet::cplx{0.0, 0.0}) {
        throw ValidationError("jet log of a series with zero constant term");
    }
    const int d = a.order();
    Jet r(d);
    r.coeff(0) = std::log(a.coeff(0));
    for (int k = 1; k <= d; ++k) {
        Jet::cplx s = a.coeff(k) * static_cast<double>(k);
        for (int j = 1; j < k; ++j) {
            s -= static_cast<double>(j) * r.coeff(j) * a.coeff(k - j);
        }
        r.coeff(k) = s / (static_cast<double>(k) * a.coeff(0));
    }
    return r;
}

// a^p for real p via exp(p log a); the constant term must be nonzero.
inline Jet jet_pow(const Jet& a, double p) {
    return jet_exp(jet_log(a) * Jet::cplx{p, 0.0});
}

inline Jet jet_cos(const Jet& a) {
    const Jet::cplx i{0.0, 1.0};
    Jet e = jet_exp(a * i);
    Jet einv = Jet::constant({1.0, 0.0}, a.order()) / e;
    return (e + einv) * Jet::cplx{0.5, 0.0};
}

inline Jet jet_sin(const Jet& a) {
    const Jet::cplx i{0.0, 1.0};
    Jet e = jet_exp(a * i);
    Jet einv = Jet::constant({1.0, 0.0}, a.order()) / e;
    return (e - einv) * (Jet::cplx{0.5, 0.0} / i);
}

}  // namespace momentprop
