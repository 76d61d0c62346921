#include "momentprop/system.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace momentprop {

const Distribution& SystemSpec::noise_law(std::size_t dist_index, int k) const {
    const auto& laws = noise_laws[dist_index];
    return laws.size() == 1 ? laws[0] : laws[std::size_t(k)];
}

double SystemSpec::control_value(std::size_t ctrl_index, int k) const {
    const auto& sched = schedules[ctrl_index];
    return sched.size() == 1 ? sched[0] : sched[std::size_t(k)];
}

namespace {

template <class V>
std::optional<std::size_t> index_of(const V& v, SymbolId s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it == v.end()) return std::nullopt;
    return std::size_t(it - v.begin());
}

}  // namespace

std::optional<std::size_t> SystemSpec::state_index(SymbolId s) const {
    return index_of(states, s);
}
std::optional<std::size_t> SystemSpec::disturbance_index(SymbolId s) const {
    return index_of(disturbances, s);
}
std::optional<std::size_t> SystemSpec::control_index(SymbolId s) const {
    return index_of(controls, s);
}

void SystemSpec::validate() const {
    if (states.empty()) throw ValidationError("system has no states");
    if (updates.size() != states.size() || initial.size() != states.size()) {
        throw ValidationError("updates and initial laws must align with states");
    }
    if (noise_laws.size() != disturbances.size()) {
        throw ValidationError("noise laws must align with disturbances");
    }
    if (schedules.size() != controls.size()) {
        throw ValidationError("schedules must align with controls");
    }
    if (horizon < 0) throw ValidationError("horizon must be non-negative");
    for (const auto& laws : noise_laws) {
        if (laws.size() != 1 && int(laws.size()) < horizon) {
            throw ValidationError("noise law schedule shorter than horizon");
        }
    }
    for (const auto& sched : schedules) {
        if (sched.size() != 1 && int(sched.size()) < horizon) {
            throw ValidationError("control schedule shorter than horizon");
        }
    }
    for (SymbolId s : states) {
        if (table.kind(s) != SymbolKind::state) {
            throw ValidationError("'" + table.name(s) + "' is not a state");
        }
    }
    for (const auto& u : updates) {
        for (const auto& t : u.terms()) {
            for (const auto& f : t.factors) {
                if (f.sym >= table.size()) {
                    throw ValidationError("update references unknown symbol");
                }
                const SymbolKind kind = table.kind(f.sym);
                if (kind == SymbolKind::state && !state_index(f.sym)) {
                    throw ValidationError("update references undeclared state '" +
                                          table.name(f.sym) + "'");
                }
                if (kind == SymbolKind::disturbance &&
                    !disturbance_index(f.sym)) {
                    throw ValidationError(
                        "update references unbound disturbance '" +
                        table.name(f.sym) + "'");
                }
                if (kind == SymbolKind::control && !control_index(f.sym)) {
                    throw ValidationError("update references unbound control '" +
                                          table.name(f.sym) + "'");
                }
            }
        }
    }
}

namespace {

bool is_identity_replacement(const MtpExpr& e, SymbolId s) {
    if (e.term_count() != 1) return false;
    const auto& t = e.terms()[0];
    return t.coef == 1.0 && t.factors.size() == 1 && t.factors[0].sym == s &&
           t.factors[0].poly_pow == 1 && !t.factors[0].trig.present();
}

}  // namespace

MtpExpr substitute_symbols(const MtpExpr& g, const SymbolTable& names,
                           const std::vector<MtpExpr>& repl) {
    MtpExpr out = MtpExpr::zero();
    for (const auto& t : g.terms()) {
        MtpExpr acc = MtpExpr::constant(t.coef);
        for (const auto& f : t.factors) {
            if (f.sym >= repl.size()) {
                throw ValidationError("no replacement for symbol '" +
                                      names.name(f.sym) + "'");
            }
            const MtpExpr& r = repl[f.sym];
            if (is_identity_replacement(r, f.sym)) {
                acc = acc * MtpExpr::from_terms({MtpTerm{1.0, {f}}});
                continue;
            }
            if (f.poly_pow > 0) acc = acc * r.pow(f.poly_pow);
            if (f.trig.present()) {
                auto aff = r.affine_view();
                if (!aff) {
                    throw ValidationError(
                        "trig factor of '" + names.name(f.sym) +
                        "' needs an affine replacement, got: " +
                        r.to_string(names));
                }
                std::vector<std::pair<SymbolId, double>> lin;
                lin.reserve(aff->linear.size());
                for (const auto& [sym, w] : aff->linear) {
                    lin.emplace_back(sym, f.trig.scale * w);
                }
                const double c0 = f.trig.scale * aff->constant + f.trig.phase;
                if (f.trig.cos_pow > 0) {
                    acc = acc * expand_affine_trig(false, lin, c0).pow(f.trig.cos_pow);
                }
                if (f.trig.sin_pow > 0) {
                    acc = acc * expand_affine_trig(true, lin, c0).pow(f.trig.sin_pow);
                }
            }
        }
        out = out + acc;
    }
    return out;
}

MtpExpr compose_states(const MtpExpr& g, const SystemSpec& spec,
                       const std::vector<MtpExpr>& replacement_by_state) {
    std::vector<MtpExpr> repl(spec.table.size());
    for (std::size_t s = 0; s < spec.table.size(); ++s) {
        repl[s] = MtpExpr::symbol(SymbolId(s));
    }
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        repl[spec.states[i]] = replacement_by_state[i];
    }
    return substitute_symbols(g, spec.table, repl);
}

MtpExpr AugmentedSystem::row_expr(std::size_t i) const {
    MtpExpr r = MtpExpr::zero();
    for (std::size_t j = 0; j < entries[i].size(); ++j) {
        if (!entries[i][j].is_zero()) {
            r = r + entries[i][j] * MtpExpr::symbol(functional_syms[j]);
        }
    }
    return r;
}

std::string AugmentedSystem::functional_name(std::size_t i) const {
    return MtpExpr::from_terms({functionals[i]}).to_string(table);
}

AugmentedSystem close_system(const SystemSpec& spec,
                             const std::vector<SymbolId>& targets,
                             int max_iterations) {
    spec.validate();
    if (targets.empty()) throw ValidationError("no target states given");

    std::vector<MtpTerm> basis;
    auto find_functional = [&](const MtpTerm& m) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].factors == m.factors) return i;
        }
        return std::nullopt;
    };
    for (SymbolId t : targets) {
        if (!spec.state_index(t)) {
            throw ValidationError("target '" + spec.table.name(t) +
                                  "' is not a declared state");
        }
        MtpTerm m{1.0, {SymbolFactor{t, 1, TrigAtom{}}}};
        if (!find_functional(m)) basis.push_back(std::move(m));
    }

    // rows[i]: functional index -> coefficient expression terms
    std::vector<std::map<std::size_t, std::vector<MtpTerm>>> rows;
    std::optional<std::size_t> one_index;

    constexpr int kDegreeCap = 64;
    for (std::size_t p = 0; p < basis.size(); ++p) {
        if (int(p) >= max_iterations) {
            throw ClosureDiverged(
                "functional basis still growing after " +
                std::to_string(max_iterations) +
                " closure iterations; the system is not finitely closable");
        }
        int degree = 0;
        for (const auto& f : basis[p].factors) {
            degree += f.poly_pow + f.trig.cos_pow + f.trig.sin_pow;
        }
        if (degree > kDegreeCap) {
            throw ClosureDiverged(
                "functional degree grew past " + std::to_string(kDegreeCap) +
                "; the system is not finitely closable");
        }
        const MtpExpr g = MtpExpr::from_terms({basis[p]});
        const MtpExpr h = compose_states(g, spec, spec.updates);

        std::map<std::size_t, std::vector<MtpTerm>> row;
        for (const auto& t : h.terms()) {
            MtpTerm state_part{1.0, {}};
            MtpTerm coef_part{t.coef, {}};
            for (const auto& f : t.factors) {
                if (spec.table.kind(f.sym) == SymbolKind::state) {
                    state_part.factors.push_back(f);
                } else {
                    coef_part.factors.push_back(f);
                }
            }
            std::size_t j;
            if (auto found = find_functional(state_part)) {
                j = *found;
            } else {
                j = basis.size();
                basis.push_back(state_part);
            }
            if (state_part.factors.empty() && !one_index) {
                one_index = j;
            }
            row[j].push_back(std::move(coef_part));
        }
        rows.push_back(std::move(row));
    }

    const std::size_t n = basis.size();

    // homogenized systems list the constant functional first
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    if (one_index && *one_index != 0) {
        order.erase(order.begin() + long(*one_index));
        order.insert(order.begin(), *one_index);
    }
    std::vector<std::size_t> pos(n);  // old index -> new index
    for (std::size_t i = 0; i < n; ++i) pos[order[i]] = i;

    AugmentedSystem aug;
    aug.table = spec.table;
    aug.functionals.resize(n);
    aug.functional_syms.resize(n);
    aug.entries.assign(n, std::vector<MtpExpr>(n, MtpExpr::zero()));
    if (one_index) aug.one_index = 0;

    for (std::size_t i = 0; i < n; ++i) {
        aug.functionals[pos[i]] = basis[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        aug.functional_syms[i] = aug.table.declare(
            "#f" + std::to_string(i), SymbolKind::state);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, terms] : rows[i]) {
            aug.entries[pos[i]][pos[j]] =
                MtpExpr::from_terms(std::vector<MtpTerm>(terms));
        }
    }
    return aug;
}

}  // namespace momentprop
