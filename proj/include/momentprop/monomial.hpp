#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "momentprop/errors.hpp"

// Enumeration of all monomials of a fixed total degree over n variables,
// ordered graded-lexicographically, with O(1) rank lookup for scattering
// expansion coefficients into moment vectors.

namespace momentprop {

using Exponents = std::vector<int>;

// Exact binomial coefficient, integer arithmetic throughout; n <= 64ish
// stays within uint64 for the orders this library supports.
std::uint64_t binomial_exact(int n, int k);

// Number of degree-alpha monomials in n variables: C(n+alpha-1, alpha).
std::uint64_t monomial_count(int n, int alpha);

class MonomialBasis {
public:
    static constexpr std::uint64_t kDimensionCap = 20000;

    // All exponent vectors with sum alpha over n variables, in
    // lexicographic order (first variable's power decreasing).
    MonomialBasis(int n, int alpha);

    // trivial degree-0 basis, for default-constructed holders
    MonomialBasis() : MonomialBasis(1, 0) {}

    int vars() const { return n_; }
    int degree() const { return alpha_; }
    std::size_t size() const { return list_.size(); }
    const Exponents& operator[](std::size_t i) const { return list_[i]; }
    const std::vector<Exponents>& monomials() const { return list_; }

    // Index of an exponent vector in this basis; nullopt when the degree
    // or length does not match.
    std::optional<std::size_t> rank(const Exponents& e) const;

private:
    int n_, alpha_;
    std::vector<Exponents> list_;
    bool packable_;
    std::vector<std::pair<std::uint64_t, std::uint32_t>> packed_;  // sorted

    static std::uint64_t pack(const Exponents& e);
};

}  // namespace momentprop
