#include "momentprop/monomial.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace momentprop {

std::uint64_t binomial_exact(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int j = 1; j <= k; ++j) {
        // multiply before dividing; the running value is always an exact
        // binomial so the division is exact
        r = r * std::uint64_t(n - k + j) / std::uint64_t(j);
    }
    return r;
}

std::uint64_t monomial_count(int n, int alpha) {
    return binomial_exact(n + alpha - 1, alpha);
}

MonomialBasis::MonomialBasis(int n, int alpha) : n_(n), alpha_(alpha) {
    if (n < 1 || alpha < 0) {
        throw ValidationError("monomial basis needs n >= 1 and degree >= 0");
    }
    const std::uint64_t dim = monomial_count(n, alpha);
    if (dim > kDimensionCap) {
        throw BasisTooLarge("moment basis dimension " + std::to_string(dim) +
                            " exceeds cap " + std::to_string(kDimensionCap));
    }
    list_.reserve(dim);
    Exponents e(n, 0);
    e[0] = alpha;
    // lexicographic successor: move one unit from the rightmost positive
    // entry left of the tail into its right neighbor, flushing the tail
    while (true) {
        list_.push_back(e);
        int i = n - 2;
        while (i >= 0 && e[i] == 0) --i;
        if (i < 0) break;
        --e[i];
        const int tail = e[n - 1];
        e[n - 1] = 0;
        e[i + 1] = tail + 1;
    }

    packable_ = n <= 16 && alpha <= 15;
    if (packable_) {
        packed_.reserve(list_.size());
        for (std::size_t i = 0; i < list_.size(); ++i) {
            packed_.emplace_back(pack(list_[i]), std::uint32_t(i));
        }
        std::sort(packed_.begin(), packed_.end());
    }
}

std::uint64_t MonomialBasis::pack(const Exponents& e) {
    std::uint64_t v = 0;
    for (int x : e) v = (v << 4) | std::uint64_t(x);
    return v;
}

std::optional<std::size_t> MonomialBasis::rank(const Exponents& e) const {
    if (int(e.size()) != n_) return std::nullopt;
    if (std::accumulate(e.begin(), e.end(), 0) != alpha_) return std::nullopt;
    for (int x : e) {
        if (x < 0) return std::nullopt;
    }
    if (packable_) {
        const std::uint64_t key = pack(e);
        auto it = std::lower_bound(
            packed_.begin(), packed_.end(), key,
            [](const auto& p, std::uint64_t k) { return p.first < k; });
        if (it == packed_.end() || it->first != key) return std::nullopt;
        return std::size_t(it->second);
    }
    auto it = std::lower_bound(list_.begin(), list_.end(), e,
                               [](const Exponents& a, const Exponents& b) {
                                   return std::lexicographical_compare(
                                       b.begin(), b.end(), a.begin(), a.end());
                               });
    if (it == list_.end() || *it != e) return std::nullopt;
    return std::size_t(it - list_.begin());
}

}  // namespace momentprop
