#include "momentprop/propagate.hpp"

#include <cstring>
#include <map>
#include <string>

#include "momentprop/transform.hpp"

namespace momentprop {

namespace {

std::uint64_t double_key(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    std::uint64_t b;
    std::memcpy(&b, &v, sizeof b);
    return b;
}

class MatrixAssembler {
public:
    MatrixAssembler(const AugmentedSystem& aug, const MonomialBasis& basis,
                    const SystemSpec& spec, const TrigMomentEngine& engine)
        : aug_(aug), basis_(basis), spec_(spec), engine_(engine) {
        for (std::size_t j = 0; j < aug.size(); ++j) {
            func_index_[aug.functional_syms[j]] = j;
        }
    }

    std::shared_ptr<const std::vector<double>> matrix_for_step(int k) {
        std::vector<std::uint64_t> sig;
        sig.reserve(spec_.controls.size() + spec_.disturbances.size());
        for (std::size_t c = 0; c < spec_.controls.size(); ++c) {
            sig.push_back(double_key(spec_.control_value(c, k)));
        }
        for (std::size_t d = 0; d < spec_.disturbances.size(); ++d) {
            sig.push_back(spec_.noise_law(d, k).key_hash());
        }
        auto it = cache_.find(sig);
        if (it != cache_.end()) return it->second;
        auto m = std::make_shared<const std::vector<double>>(assemble(k));
        cache_.emplace(std::move(sig), m);
        return m;
    }

private:
    std::vector<double> assemble(int k) {
        const std::size_t n = aug_.size();
        std::unordered_map<SymbolId, double> ctrl;
        for (std::size_t c = 0; c < spec_.controls.size(); ++c) {
            ctrl[spec_.controls[c]] = spec_.control_value(c, k);
        }
        std::vector<MtpExpr> row(n);
        for (std::size_t i = 0; i < n; ++i) {
            row[i] = ctrl.empty() ? aug_.row_expr(i)
                                  : aug_.row_expr(i).substitute(ctrl);
        }
        dists_.assign(aug_.table.size(), nullptr);
        for (std::size_t d = 0; d < spec_.disturbances.size(); ++d) {
            dists_[spec_.disturbances[d]] = &spec_.noise_law(d, k);
        }

        const std::size_t dim = basis_.size();
        std::vector<double> a(dim * dim, 0.0);
        Exponents e(n, 0);
        descend(row, 0, basis_.degree(), MtpExpr::constant(1.0), e, a);
        return a;
    }

    // enumerate all ways to spread the remaining degree over rows i..n-1,
    // sharing partial products along the way
    void descend(const std::vector<MtpExpr>& row, std::size_t i, int rem,
                 const MtpExpr& partial, Exponents& e, std::vector<double>& a) {
        const std::size_t n = row.size();
        if (partial.is_zero()) return;
        if (i + 1 == n) {
            e[i] = rem;
            MtpExpr full = partial;
            for (int m = 0; m < rem; ++m) full = full * row[i];
            finalize(full, e, a);
            e[i] = 0;
            return;
        }
        MtpExpr acc = partial;
        for (int m = 0; m <= rem; ++m) {
            e[i] = m;
            descend(row, i + 1, rem - m, acc, e, a);
            if (m < rem) acc = acc * row[i];
        }
        e[i] = 0;
    }

    void finalize(const MtpExpr& full, const Exponents& e,
                  std::vector<double>& a) {
        const auto r = basis_.rank(e);
        if (!r) throw Error("internal: monomial outside its own basis");
        const MtpExpr reduced =
            expectation(full, aug_.table, dists_, engine_);
        Exponents col(e.size(), 0);
        for (const auto& t : reduced.terms()) {
            std::fill(col.begin(), col.end(), 0);
            for (const auto& f : t.factors) {
                auto it = func_index_.find(f.sym);
                if (it == func_index_.end() || f.trig.present()) {
                    throw ValidationError(
                        "augmented transition is not linear over the "
                        "functional basis");
                }
                col[it->second] = f.poly_pow;
            }
            const auto c = basis_.rank(col);
            if (!c) {
                throw ValidationError(
                    "augmented transition mixes moment orders; expected a "
                    "homogeneous degree-" +
                    std::to_string(basis_.degree()) + " expansion");
            }
            a[*r * basis_.size() + *c] += t.coef;
        }
    }

    const AugmentedSystem& aug_;
    const MonomialBasis& basis_;
    const SystemSpec& spec_;
    const TrigMomentEngine& engine_;
    std::unordered_map<SymbolId, std::size_t> func_index_;
    std::vector<const Distribution*> dists_;
    std::map<std::vector<std::uint64_t>,
             std::shared_ptr<const std::vector<double>>>
        cache_;
};

}  // namespace

MomentSystem build_moment_system(const AugmentedSystem& aug, int alpha,
                                 const SystemSpec& spec,
                                 const TrigMomentEngine& engine) {
    if (alpha < 1) throw ValidationError("moment order must be positive");
    MomentSystem sys;
    sys.alpha = alpha;
    sys.basis = MonomialBasis(int(aug.size()), alpha);
    MatrixAssembler assembler(aug, sys.basis, spec, engine);
    sys.step_matrices.reserve(spec.horizon);
    for (int k = 0; k < spec.horizon; ++k) {
        sys.step_matrices.push_back(assembler.matrix_for_step(k));
    }
    return sys;
}

std::vector<double> initial_moment_vector(const AugmentedSystem& aug,
                                          const MonomialBasis& basis,
                                          const SystemSpec& spec,
                                          const TrigMomentEngine& engine) {
    const std::size_t n = aug.size();
    std::vector<double> v(basis.size(), 0.0);
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const Exponents& e = basis[r];
        MtpExpr q = MtpExpr::constant(1.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (e[j] > 0) {
                q = q * MtpExpr::from_terms({aug.functionals[j]}).pow(e[j]);
            }
        }
        double sum = 0.0;
        for (const auto& t : q.terms()) {
            double val = t.coef;
            for (const auto& f : t.factors) {
                const auto si = spec.state_index(f.sym);
                if (!si) {
                    throw UnboundSymbol("functional references non-state '" +
                                        spec.table.name(f.sym) + "'");
                }
                val *= engine.moment(spec.initial[*si], f.poly_pow,
                                     f.trig.scale, f.trig.phase,
                                     f.trig.cos_pow, f.trig.sin_pow);
            }
            sum += val;
        }
        v[r] = sum;
    }
    return v;
}

const OrderTrajectory& PropagationResult::order(int alpha) const {
    for (const auto& o : orders) {
        if (o.alpha == alpha) return o;
    }
    throw MonomialNotInBasis("order " + std::to_string(alpha) +
                             " was not propagated");
}

PropagationResult propagate_recursive(const SystemSpec& spec,
                                      const std::vector<SymbolId>& targets,
                                      const std::vector<int>& orders,
                                      const TrigMomentEngine& engine) {
    PropagationResult result;
    result.aug = close_system(spec, targets);
    for (int alpha : orders) {
        MomentSystem sys = build_moment_system(result.aug, alpha, spec, engine);
        OrderTrajectory traj;
        traj.alpha = alpha;
        traj.basis = sys.basis;
        traj.values.reserve(spec.horizon + 1);
        traj.values.push_back(
            initial_moment_vector(result.aug, sys.basis, spec, engine));
        const std::size_t dim = sys.basis.size();
        for (int k = 0; k < spec.horizon; ++k) {
            const auto& a = *sys.step_matrices[k];
            const auto& m = traj.values.back();
            std::vector<double> next(dim, 0.0);
            for (std::size_t r = 0; r < dim; ++r) {
                double s = 0.0;
                const double* arow = a.data() + r * dim;
                for (std::size_t c = 0; c < dim; ++c) s += arow[c] * m[c];
                next[r] = s;
            }
            traj.values.push_back(std::move(next));
        }
        result.orders.push_back(std::move(traj));
    }
    return result;
}

std::vector<double> extract_state_moments(
    const PropagationResult& result,
    const std::vector<std::pair<SymbolId, int>>& powers) {
    int alpha = 0;
    for (const auto& [sym, p] : powers) {
        (void)sym;
        if (p < 0) throw ValidationError("negative power requested");
        alpha += p;
    }
    const OrderTrajectory& traj = result.order(alpha);
    Exponents e(result.aug.size(), 0);
    for (const auto& [sym, p] : powers) {
        MtpTerm want{1.0, {SymbolFactor{sym, 1, TrigAtom{}}}};
        bool found = false;
        for (std::size_t j = 0; j < result.aug.size(); ++j) {
            if (result.aug.functionals[j].factors == want.factors) {
                e[j] += p;
                found = true;
                break;
            }
        }
        if (!found) {
            throw MonomialNotInBasis("state '" +
                                     result.aug.table.name(sym) +
                                     "' is not an augmented functional");
        }
    }
    const auto r = traj.basis.rank(e);
    if (!r) throw MonomialNotInBasis("requested monomial not in basis");
    std::vector<double> out;
    out.reserve(traj.values.size());
    for (const auto& v : traj.values) out.push_back(v[*r]);
    return out;
}

std::vector<std::vector<double>> propagate_direct(
    const SystemSpec& spec, const std::vector<SymbolId>& targets,
    const std::vector<int>& orders, const TrigMomentEngine& engine) {
    spec.validate();
    SymbolTable table;
    std::vector<const Distribution*> binds;
    std::vector<Distribution> owned;
    owned.reserve(spec.states.size() +
                  spec.disturbances.size() * std::size_t(spec.horizon));

    std::vector<MtpExpr> current(spec.states.size());
    std::vector<MtpExpr> repl(spec.table.size(), MtpExpr::zero());
    for (std::size_t i = 0; i < spec.states.size(); ++i) {
        const SymbolId s = table.declare(
            spec.table.name(spec.states[i]) + "@0", SymbolKind::disturbance);
        owned.push_back(spec.initial[i]);
        current[i] = MtpExpr::symbol(s);
    }
    for (int k = 0; k < spec.horizon; ++k) {
        for (std::size_t i = 0; i < spec.states.size(); ++i) {
            repl[spec.states[i]] = current[i];
        }
        for (std::size_t d = 0; d < spec.disturbances.size(); ++d) {
            const SymbolId s = table.declare(
                spec.table.name(spec.disturbances[d]) + "@" +
                    std::to_string(k + 1),
                SymbolKind::disturbance);
            owned.push_back(spec.noise_law(d, k));
            repl[spec.disturbances[d]] = MtpExpr::symbol(s);
        }
        for (std::size_t c = 0; c < spec.controls.size(); ++c) {
            repl[spec.controls[c]] =
                MtpExpr::constant(spec.control_value(c, k));
        }
        std::vector<MtpExpr> next(current.size());
        for (std::size_t i = 0; i < spec.states.size(); ++i) {
            next[i] = substitute_symbols(spec.updates[i], spec.table, repl);
        }
        current = std::move(next);
    }
    binds.reserve(owned.size());
    for (const auto& d : owned) binds.push_back(&d);

    std::vector<std::vector<double>> out;
    out.reserve(targets.size());
    for (SymbolId t : targets) {
        const auto si = spec.state_index(t);
        if (!si) {
            throw ValidationError("target '" + spec.table.name(t) +
                                  "' is not a declared state");
        }
        std::vector<double> row;
        row.reserve(orders.size());
        for (int alpha : orders) {
            row.push_back(
                pushforward_moment(current[*si], table, binds, alpha, engine));
        }
        out.push_back(std::move(row));
    }
    return out;
}

}  // namespace momentprop
