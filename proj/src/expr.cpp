#include "momentprop/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "momentprop/errors.hpp"

namespace momentprop {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

// cos(phase)^c * sin(phase)^q of a zero-scale atom folds into the
// coefficient; negative scales flip via parity; phases wrap into [0, 2*pi).
void normalize_atom(TrigAtom& t, double& coef) {
    if (!t.present()) {
        t = TrigAtom{};
        return;
    }
    if (t.scale == 0.0) {
        for (int i = 0; i < t.cos_pow; ++i) coef *= std::cos(t.phase);
        for (int i = 0; i < t.sin_pow; ++i) coef *= std::sin(t.phase);
        t = TrigAtom{};
        return;
    }
    if (t.scale < 0.0) {
        t.scale = -t.scale;
        t.phase = -t.phase;
        if (t.sin_pow % 2 != 0) coef = -coef;
    }
    t.phase = std::fmod(t.phase, kTwoPi);
    if (t.phase < 0.0) t.phase += kTwoPi;
    if (t.phase == kTwoPi) t.phase = 0.0;
}

int cmp_double(double a, double b) {
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

int cmp_factor(const SymbolFactor& a, const SymbolFactor& b) {
    if (a.sym != b.sym) return a.sym < b.sym ? -1 : 1;
    if (a.poly_pow != b.poly_pow) return a.poly_pow < b.poly_pow ? -1 : 1;
    if (int c = cmp_double(a.trig.scale, b.trig.scale)) return c;
    if (int c = cmp_double(a.trig.phase, b.trig.phase)) return c;
    if (a.trig.cos_pow != b.trig.cos_pow) {
        return a.trig.cos_pow < b.trig.cos_pow ? -1 : 1;
    }
    if (a.trig.sin_pow != b.trig.sin_pow) {
        return a.trig.sin_pow < b.trig.sin_pow ? -1 : 1;
    }
    return 0;
}

int cmp_signature(const MtpTerm& a, const MtpTerm& b) {
    const std::size_t n = std::min(a.factors.size(), b.factors.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (int c = cmp_factor(a.factors[i], b.factors[i])) return c;
    }
    if (a.factors.size() != b.factors.size()) {
        return a.factors.size() < b.factors.size() ? -1 : 1;
    }
    return 0;
}

// Small polynomials in (cos y, sin y), keyed by (cos_pow, sin_pow), used
// while rewriting one trig atom in terms of another.
using CsPoly = std::map<std::pair<int, int>, double>;

CsPoly cs_mul(const CsPoly& a, const CsPoly& b) {
    CsPoly r;
    for (const auto& [ka, va] : a) {
        for (const auto& [kb, vb] : b) {
            r[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
        }
    }
    return r;
}

CsPoly cs_pow(const CsPoly& a, int n) {
    CsPoly r{{{0, 0}, 1.0}};
    for (int i = 0; i < n; ++i) r = cs_mul(r, a);
    return r;
}

// Chebyshev expansions: cos(m y) = T_m(cos y), sin(m y) = sin y U_{m-1}(cos y).
void chebyshev_cs(int m, CsPoly& cos_my, CsPoly& sin_my) {
    std::vector<std::vector<double>> T(m + 1), U(m + 1);
    T[0] = {1.0};
    if (m >= 1) T[1] = {0.0, 1.0};
    U[0] = {1.0};
    if (m >= 1) U[1] = {0.0, 2.0};
    for (int j = 2; j <= m; ++j) {
        T[j].assign(j + 1, 0.0);
        U[j].assign(j + 1, 0.0);
        for (int d = 0; d < j; ++d) {
            T[j][d + 1] += 2.0 * T[j - 1][d];
            U[j][d + 1] += 2.0 * U[j - 1][d];
        }
        for (std::size_t d = 0; d < T[j - 2].size(); ++d) T[j][d] -= T[j - 2][d];
        for (std::size_t d = 0; d < U[j - 2].size(); ++d) U[j][d] -= U[j - 2][d];
    }
    cos_my.clear();
    sin_my.clear();
    for (std::size_t d = 0; d < T[m].size(); ++d) {
        if (T[m][d] != 0.0) cos_my[{static_cast<int>(d), 0}] = T[m][d];
    }
    const auto& u = U[m >= 1 ? m - 1 : 0];
    for (std::size_t d = 0; d < u.size(); ++d) {
        if (m >= 1 && u[d] != 0.0) sin_my[{static_cast<int>(d), 1}] = u[d];
    }
}

// Combines two trig atoms of the same symbol with distinct arguments.
// Result: list of (atom, coefficient) whose weighted sum equals the product.
std::vector<std::pair<TrigAtom, double>> merge_atoms(TrigAtom a, TrigAtom b) {
    if (a.scale > b.scale) std::swap(a, b);

    const double ratio = b.scale / a.scale;
    const long long m = std::llround(ratio);
    const bool integer_ratio =
        m >= 1 && m <= 8 &&
        std::abs(b.scale - static_cast<double>(m) * a.scale) <=
            1e-12 * (a.scale + b.scale);

    std::vector<std::pair<TrigAtom, double>> out;

    if (integer_ratio) {
        // rewrite b's argument as m*y + delta with y = a's argument
        const double delta = b.phase - static_cast<double>(m) * a.phase;
        const double cd = std::cos(delta);
        const double sd = std::sin(delta);
        CsPoly cos_my, sin_my;
        chebyshev_cs(static_cast<int>(m), cos_my, sin_my);

        CsPoly cos_b, sin_b;  // cos/sin of (m*y + delta) in powers of (C, S)
        for (const auto& [k, v] : cos_my) {
            cos_b[k] += cd * v;
            sin_b[k] += sd * v;
        }
        for (const auto& [k, v] : sin_my) {
            cos_b[k] -= sd * v;
            sin_b[k] += cd * v;
        }

        CsPoly p = cs_mul(cs_pow(cos_b, b.cos_pow), cs_pow(sin_b, b.sin_pow));
        for (const auto& [k, v] : p) {
            if (v == 0.0) continue;
            TrigAtom t{a.scale, a.phase, a.cos_pow + k.first, a.sin_pow + k.second};
            out.emplace_back(t, v);
        }
        return out;
    }

    if (a.cos_pow + a.sin_pow == 1 && b.cos_pow + b.sin_pow == 1) {
        // product-to-sum; the resulting atoms get normalized by the caller
        const double sp = a.scale + b.scale, pp = a.phase + b.phase;
        const double sm = a.scale - b.scale, pm = a.phase - b.phase;
        const bool ac = a.cos_pow == 1, bc = b.cos_pow == 1;
        if (ac && bc) {
            out.emplace_back(TrigAtom{sm, pm, 1, 0}, 0.5);
            out.emplace_back(TrigAtom{sp, pp, 1, 0}, 0.5);
        } else if (!ac && !bc) {
            out.emplace_back(TrigAtom{sm, pm, 1, 0}, 0.5);
            out.emplace_back(TrigAtom{sp, pp, 1, 0}, -0.5);
        } else if (!ac && bc) {  // sin(y1) cos(y2)
            out.emplace_back(TrigAtom{sp, pp, 0, 1}, 0.5);
            out.emplace_back(TrigAtom{sm, pm, 0, 1}, 0.5);
        } else {  // cos(y1) sin(y2)
            out.emplace_back(TrigAtom{sp, pp, 0, 1}, 0.5);
            out.emplace_back(TrigAtom{sm, pm, 0, 1}, -0.5);
        }
        return out;
    }

    throw IncompatibleAtoms(
        "cannot combine trig arguments with non-integer scale ratio " +
        std::to_string(ratio) + " at powers above one");
}

void append_double(std::string& s, double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    s.append(buf, p);
}

}  // namespace

MtpExpr MtpExpr::constant(double c) {
    MtpExpr e;
    if (c != 0.0) e.terms_.push_back(MtpTerm{c, {}});
    return e;
}

MtpExpr MtpExpr::symbol(SymbolId s, int pow) {
    if (pow < 0) throw ValidationError("symbol power must be nonnegative");
    if (pow == 0) return constant(1.0);
    MtpExpr e;
    e.terms_.push_back(MtpTerm{1.0, {SymbolFactor{s, pow, {}}}});
    return e;
}

MtpExpr MtpExpr::atom(SymbolId s, double scale, double phase, int cos_pow,
                      int sin_pow) {
    if (cos_pow < 0 || sin_pow < 0) {
        throw ValidationError("trig powers must be nonnegative");
    }
    double coef = 1.0;
    TrigAtom t{scale, phase, cos_pow, sin_pow};
    normalize_atom(t, coef);
    MtpExpr e;
    if (coef == 0.0) return e;
    if (!t.present()) return constant(coef);
    e.terms_.push_back(MtpTerm{coef, {SymbolFactor{s, 0, t}}});
    return e;
}

MtpExpr MtpExpr::from_terms(std::vector<MtpTerm> terms) {
    MtpExpr e;
    e.terms_ = std::move(terms);
    e.canonicalize();
    return e;
}

void MtpExpr::canonicalize() {
    for (auto& t : terms_) {
        for (auto& f : t.factors) normalize_atom(f.trig, t.coef);
        std::sort(t.factors.begin(), t.factors.end(),
                  [](const SymbolFactor& a, const SymbolFactor& b) {
                      return a.sym < b.sym;
                  });
        // merge duplicate symbols (only like trig arguments can meet here;
        // operator* resolves genuine conflicts before this point)
        std::vector<SymbolFactor> merged;
        for (auto& f : t.factors) {
            if (f.poly_pow == 0 && !f.trig.present()) continue;
            if (!merged.empty() && merged.back().sym == f.sym) {
                auto& m = merged.back();
                m.poly_pow += f.poly_pow;
                if (f.trig.present()) {
                    if (!m.trig.present()) {
                        m.trig = f.trig;
                    } else if (m.trig.scale == f.trig.scale &&
                               m.trig.phase == f.trig.phase) {
                        m.trig.cos_pow += f.trig.cos_pow;
                        m.trig.sin_pow += f.trig.sin_pow;
                    } else {
                        throw IncompatibleAtoms(
                            "term carries two distinct trig arguments for one "
                            "symbol");
                    }
                }
            } else {
                merged.push_back(f);
            }
        }
        t.factors = std::move(merged);
    }

    std::erase_if(terms_, [](const MtpTerm& t) { return t.coef == 0.0; });
    std::sort(terms_.begin(), terms_.end(), [](const MtpTerm& a, const MtpTerm& b) {
        return cmp_signature(a, b) < 0;
    });

    std::vector<MtpTerm> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!out.empty() && cmp_signature(out.back(), t) == 0) {
            out.back().coef += t.coef;
        } else {
            out.push_back(std::move(t));
        }
    }
    std::erase_if(out, [](const MtpTerm& t) { return t.coef == 0.0; });
    terms_ = std::move(out);

    if (terms_.size() > kTermBudget) {
        throw TermBudgetExceeded("expression exceeds " +
                                 std::to_string(kTermBudget) + " terms");
    }
}

std::optional<MtpExpr::AffineView> MtpExpr::affine_view() const {
    AffineView v;
    for (const auto& t : terms_) {
        if (t.factors.empty()) {
            v.constant += t.coef;
            continue;
        }
        if (t.factors.size() != 1) return std::nullopt;
        const auto& f = t.factors[0];
        if (f.poly_pow != 1 || f.trig.present()) return std::nullopt;
        v.linear.emplace_back(f.sym, t.coef);
    }
    return v;
}

MtpExpr MtpExpr::operator+(const MtpExpr& o) const {
    // both inputs canonical: merge the sorted term lists
    MtpExpr r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        const int c = cmp_signature(terms_[i], o.terms_[j]);
        if (c < 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c > 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            MtpTerm t = terms_[i++];
            t.coef += o.terms_[j++].coef;
            if (t.coef != 0.0) r.terms_.push_back(std::move(t));
        }
    }
    while (i < terms_.size()) r.terms_.push_back(terms_[i++]);
    while (j < o.terms_.size()) r.terms_.push_back(o.terms_[j++]);
    if (r.terms_.size() > kTermBudget) {
        throw TermBudgetExceeded("expression exceeds " +
                                 std::to_string(kTermBudget) + " terms");
    }
    return r;
}

MtpExpr MtpExpr::operator-(const MtpExpr& o) const { return *this + o * -1.0; }

MtpExpr MtpExpr::operator*(double s) const {
    MtpExpr r = *this;
    if (s == 0.0) return zero();
    for (auto& t : r.terms_) t.coef *= s;
    return r;
}

MtpExpr MtpExpr::mul_terms(const MtpTerm& a, const MtpTerm& b) {
    MtpTerm base;
    base.coef = a.coef * b.coef;
    // expansions for symbols whose atoms could not merge directly
    std::vector<std::vector<std::pair<TrigAtom, double>>> pending_atoms;
    std::vector<SymbolId> pending_syms;
    std::vector<int> pending_poly;

    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j >= b.factors.size() ||
            (i < a.factors.size() && a.factors[i].sym < b.factors[j].sym)) {
            base.factors.push_back(a.factors[i++]);
            continue;
        }
        if (i >= a.factors.size() || b.factors[j].sym < a.factors[i].sym) {
            base.factors.push_back(b.factors[j++]);
            continue;
        }
        const auto& fa = a.factors[i++];
        const auto& fb = b.factors[j++];
        SymbolFactor f{fa.sym, fa.poly_pow + fb.poly_pow, {}};
        if (!fa.trig.present()) {
            f.trig = fb.trig;
            base.factors.push_back(f);
        } else if (!fb.trig.present()) {
            f.trig = fa.trig;
            base.factors.push_back(f);
        } else if (fa.trig.scale == fb.trig.scale &&
                   fa.trig.phase == fb.trig.phase) {
            f.trig = fa.trig;
            f.trig.cos_pow += fb.trig.cos_pow;
            f.trig.sin_pow += fb.trig.sin_pow;
            base.factors.push_back(f);
        } else {
            pending_atoms.push_back(merge_atoms(fa.trig, fb.trig));
            pending_syms.push_back(fa.sym);
            pending_poly.push_back(f.poly_pow);
        }
    }

    if (pending_atoms.empty()) {
        MtpExpr r;
        r.terms_.push_back(std::move(base));
        r.canonicalize();
        return r;
    }

    // cross product over the per-symbol expansions
    std::vector<MtpTerm> out;
    std::vector<std::size_t> idx(pending_atoms.size(), 0);
    for (;;) {
        MtpTerm t = base;
        for (std::size_t k = 0; k < pending_atoms.size(); ++k) {
            const auto& [atom, coef] = pending_atoms[k][idx[k]];
            t.coef *= coef;
            t.factors.push_back(SymbolFactor{pending_syms[k], pending_poly[k], atom});
        }
        out.push_back(std::move(t));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == pending_atoms[k].size()) {
            idx[k++] = 0;
        }
        if (k == idx.size()) break;
    }
    MtpExpr r;
    r.terms_ = std::move(out);
    r.canonicalize();
    return r;
}

MtpExpr MtpExpr::operator*(const MtpExpr& o) const {
    MtpExpr r;
    for (const auto& ta : terms_) {
        for (const auto& tb : o.terms_) {
            MtpExpr p = mul_terms(ta, tb);
            for (auto& t : p.terms_) r.terms_.push_back(std::move(t));
            if (r.terms_.size() > 4 * kTermBudget) {
                throw TermBudgetExceeded("product exceeds the term budget");
            }
        }
    }
    r.canonicalize();
    return r;
}

MtpExpr MtpExpr::pow(int n) const {
    if (n < 0) throw ValidationError("expression power must be nonnegative");
    MtpExpr r = constant(1.0);
    MtpExpr base = *this;
    while (n > 0) {
        if (n & 1) r = r * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return r;
}

MtpExpr MtpExpr::derivative(SymbolId s) const {
    MtpExpr r;
    for (const auto& t : terms_) {
        auto it = std::find_if(t.factors.begin(), t.factors.end(),
                               [&](const SymbolFactor& f) { return f.sym == s; });
        if (it == t.factors.end()) continue;
        const SymbolFactor f = *it;

        auto push_variant = [&](double coef, SymbolFactor nf) {
            if (coef == 0.0) return;
            MtpTerm nt;
            nt.coef = t.coef * coef;
            for (const auto& g : t.factors) {
                if (g.sym == s) {
                    if (nf.poly_pow > 0 || nf.trig.present()) {
                        nt.factors.push_back(nf);
                    }
                } else {
                    nt.factors.push_back(g);
                }
            }
            r.terms_.push_back(std::move(nt));
        };

        if (f.poly_pow > 0) {
            SymbolFactor nf = f;
            nf.poly_pow -= 1;
            push_variant(static_cast<double>(f.poly_pow), nf);
        }
        if (f.trig.cos_pow > 0) {
            SymbolFactor nf = f;
            nf.trig.cos_pow -= 1;
            nf.trig.sin_pow += 1;
            push_variant(-static_cast<double>(f.trig.cos_pow) * f.trig.scale, nf);
        }
        if (f.trig.sin_pow > 0) {
            SymbolFactor nf = f;
            nf.trig.sin_pow -= 1;
            nf.trig.cos_pow += 1;
            push_variant(static_cast<double>(f.trig.sin_pow) * f.trig.scale, nf);
        }
    }
    r.canonicalize();
    return r;
}

double MtpExpr::eval(const std::vector<double>& value_by_symbol) const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double v = t.coef;
        for (const auto& f : t.factors) {
            if (f.sym >= value_by_symbol.size()) {
                throw UnboundSymbol("no value for symbol id " +
                                    std::to_string(f.sym));
            }
            const double x = value_by_symbol[f.sym];
            for (int i = 0; i < f.poly_pow; ++i) v *= x;
            if (f.trig.present()) {
                const double y = f.trig.scale * x + f.trig.phase;
                const double c = std::cos(y), sn = std::sin(y);
                for (int i = 0; i < f.trig.cos_pow; ++i) v *= c;
                for (int i = 0; i < f.trig.sin_pow; ++i) v *= sn;
            }
        }
        sum += v;
    }
    return sum;
}

MtpExpr MtpExpr::substitute(
    const std::unordered_map<SymbolId, double>& values) const {
    std::vector<MtpTerm> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        MtpTerm nt;
        nt.coef = t.coef;
        for (const auto& f : t.factors) {
            auto it = values.find(f.sym);
            if (it == values.end()) {
                nt.factors.push_back(f);
                continue;
            }
            const double x = it->second;
            for (int i = 0; i < f.poly_pow; ++i) nt.coef *= x;
            if (f.trig.present()) {
                const double y = f.trig.scale * x + f.trig.phase;
                for (int i = 0; i < f.trig.cos_pow; ++i) nt.coef *= std::cos(y);
                for (int i = 0; i < f.trig.sin_pow; ++i) nt.coef *= std::sin(y);
            }
        }
        out.push_back(std::move(nt));
    }
    return from_terms(std::move(out));
}

bool MtpExpr::operator==(const MtpExpr& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (terms_[i].coef != o.terms_[i].coef) return false;
        if (!(terms_[i].factors == o.terms_[i].factors)) return false;
    }
    return true;
}

std::string MtpExpr::to_string(const SymbolTable& table) const {
    if (terms_.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms_) {
        double coef = t.coef;
        if (!first) {
            s += coef < 0.0 ? " - " : " + ";
            if (coef < 0.0) coef = -coef;
        } else if (coef < 0.0 && !t.factors.empty()) {
            s += "-";
            coef = -coef;
        }
        first = false;

        bool wrote = false;
        if (coef != 1.0 || t.factors.empty()) {
            append_double(s, coef);
            wrote = true;
        }
        for (const auto& f : t.factors) {
            auto star = [&] {
                if (wrote) s += "*";
                wrote = true;
            };
            if (f.poly_pow > 0) {
                star();
                s += table.name(f.sym);
                if (f.poly_pow > 1) {
                    s += "^";
                    s += std::to_string(f.poly_pow);
                }
            }
            if (f.trig.present()) {
                auto arg = [&] {
                    if (f.trig.scale != 1.0) {
                        append_double(s, f.trig.scale);
                        s += "*";
                    }
                    s += table.name(f.sym);
                    if (f.trig.phase != 0.0) {
                        s += "+";
                        append_double(s, f.trig.phase);
                    }
                };
                if (f.trig.cos_pow > 0) {
                    star();
                    s += "cos(";
                    arg();
                    s += ")";
                    if (f.trig.cos_pow > 1) {
                        s += "^";
                        s += std::to_string(f.trig.cos_pow);
                    }
                }
                if (f.trig.sin_pow > 0) {
                    star();
                    s += "sin(";
                    arg();
                    s += ")";
                    if (f.trig.sin_pow > 1) {
                        s += "^";
                        s += std::to_string(f.trig.sin_pow);
                    }
                }
            }
        }
    }
    return s;
}

MtpExpr expand_affine_trig(bool is_sin,
                           const std::vector<std::pair<SymbolId, double>>& linear,
                           double constant) {
    MtpExpr ec = MtpExpr::constant(std::cos(constant));
    MtpExpr es = MtpExpr::constant(std::sin(constant));
    for (const auto& [sym, coef] : linear) {
        if (coef == 0.0) continue;
        const MtpExpr ca = MtpExpr::atom(sym, coef, 0.0, 1, 0);
        const MtpExpr sa = MtpExpr::atom(sym, coef, 0.0, 0, 1);
        MtpExpr nc = ec * ca - es * sa;
        MtpExpr ns = es * ca + ec * sa;
        ec = std::move(nc);
        es = std::move(ns);
    }
    return is_sin ? es : ec;
}

MtpExpr expectation(const MtpExpr& e, const SymbolTable& table,
                    const std::vector<const Distribution*>& dist_by_symbol,
                    const TrigMomentEngine& engine,
                    const std::vector<char>* keep_mask) {
    std::vector<MtpTerm> out;
    out.reserve(e.terms().size());
    for (const auto& t : e.terms()) {
        MtpTerm nt;
        nt.coef = t.coef;
        for (const auto& f : t.factors) {
            switch (table.kind(f.sym)) {
                case SymbolKind::state:
                    if (keep_mask != nullptr &&
                        (f.sym >= keep_mask->size() || !(*keep_mask)[f.sym])) {
                        throw UnboundSymbol("state symbol '" + table.name(f.sym) +
                                            "' is outside the kept set");
                    }
                    nt.factors.push_back(f);
                    break;
                case SymbolKind::disturbance: {
                    const Distribution* d = f.sym < dist_by_symbol.size()
                                                ? dist_by_symbol[f.sym]
                                                : nullptr;
                    if (d == nullptr) {
                        throw UnboundSymbol("disturbance symbol '" +
                                            table.name(f.sym) +
                                            "' has no distribution");
                    }
                    nt.coef *= engine.moment(*d, f.poly_pow, f.trig.scale,
                                             f.trig.phase, f.trig.cos_pow,
                                             f.trig.sin_pow);
                    break;
                }
                case SymbolKind::control:
                case SymbolKind::constant:
                    throw UnboundSymbol(
                        "symbol '" + table.name(f.sym) +
                        "' must be substituted numerically before expectation");
            }
        }
        out.push_back(std::move(nt));
    }
    return MtpExpr::from_terms(std::move(out));
}

}  // namespace momentprop
