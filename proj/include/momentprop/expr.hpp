#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "momentprop/symbol.hpp"
#include "momentprop/trig_moment.hpp"

// Canonical mixed trigonometric polynomials over named symbols.
//
// A term is coefficient * product over symbols of
//     sym^poly_pow * cos^cos_pow(scale*sym + phase) * sin^sin_pow(...)
// with at most one trig argument (scale, phase) per symbol per term.  Sums
// keep terms sorted by signature and merged, so equality is structural.
//
// Products that would put two distinct trig arguments on one symbol are
// rewritten on the fly: integer scale ratios up to 8 (a ratio of 1 covers
// phase mismatches) expand the higher-frequency atom into Chebyshev
// polynomials of the lower one; otherwise two single-power atoms combine by
// product-to-sum.  Anything else raises IncompatibleAtoms.

namespace momentprop {

struct TrigAtom {
    double scale = 0.0;  // > 0 when present
    double phase = 0.0;  // in [0, 2*pi)
    int cos_pow = 0;
    int sin_pow = 0;

    bool present() const { return cos_pow > 0 || sin_pow > 0; }
    bool operator==(const TrigAtom&) const = default;
};

struct SymbolFactor {
    SymbolId sym = 0;
    int poly_pow = 0;
    TrigAtom trig;

    bool operator==(const SymbolFactor&) const = default;
};

struct MtpTerm {
    double coef = 0.0;
    std::vector<SymbolFactor> factors;  // sorted by sym, one entry per symbol
};

class MtpExpr {
public:
    static constexpr std::size_t kTermBudget = 200000;

    MtpExpr() = default;

    static MtpExpr zero() { return MtpExpr(); }
    static MtpExpr constant(double c);
    static MtpExpr symbol(SymbolId s, int pow = 1);
    // cos^c(scale*sym + phase) * sin^q(scale*sym + phase), normalized so the
    // stored scale is positive and the phase lies in [0, 2*pi)
    static MtpExpr atom(SymbolId s, double scale, double phase, int cos_pow,
                        int sin_pow);
    static MtpExpr from_terms(std::vector<MtpTerm> terms);

    const std::vector<MtpTerm>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    // nullopt unless the expression is an affine combination of plain
    // symbols; otherwise the constant part and per-symbol coefficients
    struct AffineView {
        double constant = 0.0;
        std::vector<std::pair<SymbolId, double>> linear;
    };
    std::optional<AffineView> affine_view() const;

    MtpExpr operator+(const MtpExpr& o) const;
    MtpExpr operator-(const MtpExpr& o) const;
    MtpExpr operator*(const MtpExpr& o) const;
    MtpExpr operator*(double s) const;
    MtpExpr pow(int n) const;

    MtpExpr derivative(SymbolId s) const;

    double eval(const std::vector<double>& value_by_symbol) const;

    // folds the given symbols to numbers; remaining symbols stay symbolic
    MtpExpr substitute(const std::unordered_map<SymbolId, double>& values) const;

    std::string to_string(const SymbolTable& table) const;

    bool operator==(const MtpExpr& o) const;

private:
    static MtpExpr mul_terms(const MtpTerm& a, const MtpTerm& b);
    void canonicalize();

    std::vector<MtpTerm> terms_;
};

inline MtpExpr operator*(double s, const MtpExpr& e) { return e * s; }

// cos or sin of sum_i coef_i * sym_i + c0, fully expanded by angle addition
// into products of single-symbol atoms; the constant folds in numerically.
MtpExpr expand_affine_trig(bool is_sin,
                           const std::vector<std::pair<SymbolId, double>>& linear,
                           double constant);

// E[e] where disturbance symbols follow the bound laws and are mutually
// independent of each other and of the states.  State symbols stay symbolic,
// so the result is a linear form over state monomials, itself an MtpExpr.
// Control or constant symbols must have been substituted away; a surviving
// one, an unbound disturbance, or a state outside `keep` (when given) raises
// UnboundSymbol.
MtpExpr expectation(const MtpExpr& e, const SymbolTable& table,
                    const std::vector<const Distribution*>& dist_by_symbol,
                    const TrigMomentEngine& engine,
                    const std::vector<char>* keep_mask = nullptr);

}  // namespace momentprop
