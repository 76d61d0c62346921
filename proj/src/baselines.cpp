#include "momentprop/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>

namespace momentprop {
namespace {

constexpr std::size_t kBlockSize = 65536;

void check_symmetric(const std::vector<double>& cov, std::size_t n) {
    double scale = 1.0;
    for (double v : cov) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(cov[i * n + j] - cov[j * n + i]) > 1e-12 * scale) {
                throw ValidationError("covariance matrix is not symmetric");
            }
        }
    }
}

// Every symbol used by the outputs must be one of the args.
void check_bound(const SymbolTable& table, const std::vector<MtpExpr>& outputs,
                 const std::vector<SymbolId>& args) {
    std::vector<char> bound(table.size(), 0);
    for (SymbolId s : args) bound.at(s) = 1;
    for (const auto& e : outputs) {
        for (const auto& t : e.terms()) {
            for (const auto& f : t.factors) {
                if (f.sym >= bound.size() || !bound[f.sym]) {
                    throw UnboundSymbol("output uses symbol '" +
                                        table.name(f.sym) +
                                        "' with no belief coordinate");
                }
            }
        }
    }
}

std::vector<double> eval_outputs(const std::vector<MtpExpr>& outputs,
                                 const std::vector<SymbolId>& args,
                                 const std::vector<double>& coords,
                                 std::vector<double>& scratch) {
    for (std::size_t i = 0; i < args.size(); ++i) scratch[args[i]] = coords[i];
    std::vector<double> out(outputs.size());
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        out[i] = outputs[i].eval(scratch);
    }
    return out;
}

// Controls of the step folded to numbers; states and disturbances remain.
std::vector<MtpExpr> step_outputs(const SystemSpec& spec, int k) {
    std::unordered_map<SymbolId, double> ctrl;
    for (std::size_t c = 0; c < spec.controls.size(); ++c) {
        ctrl.emplace(spec.controls[c], spec.control_value(c, k));
    }
    std::vector<MtpExpr> outputs;
    outputs.reserve(spec.updates.size());
    for (const auto& u : spec.updates) outputs.push_back(u.substitute(ctrl));
    return outputs;
}

// States stacked with the step's moment-matched disturbances.
GaussianBelief stacked_belief(const SystemSpec& spec,
                              const GaussianBelief& belief, int k) {
    const std::size_t nx = spec.states.size();
    const std::size_t nw = spec.disturbances.size();
    const std::size_t n = nx + nw;
    GaussianBelief z;
    z.mean.assign(n, 0.0);
    z.cov.assign(n * n, 0.0);
    for (std::size_t i = 0; i < nx; ++i) {
        z.mean[i] = belief.mean[i];
        for (std::size_t j = 0; j < nx; ++j) {
            z.cov[i * n + j] = belief.cov_at(i, j);
        }
    }
    for (std::size_t d = 0; d < nw; ++d) {
        const Distribution& law = spec.noise_law(d, k);
        z.mean[nx + d] = law.mean();
        z.cov[(nx + d) * n + (nx + d)] = law.variance();
    }
    return z;
}

std::vector<SymbolId> stacked_args(const SystemSpec& spec) {
    std::vector<SymbolId> args = spec.states;
    args.insert(args.end(), spec.disturbances.begin(), spec.disturbances.end());
    return args;
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n == 0) return 0.0;
    if (n == 1) return v[0];
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

double int_pow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

double default_kappa(std::size_t n) { return 3.0 - static_cast<double>(n); }

GaussianBelief moment_matched_belief(
    const std::vector<const Distribution*>& laws) {
    const std::size_t n = laws.size();
    GaussianBelief b;
    b.mean.resize(n);
    b.cov.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        b.mean[i] = laws[i]->mean();
        b.cov[i * n + i] = laws[i]->variance();
    }
    return b;
}

std::vector<double> scaled_sqrt_factor(const std::vector<double>& cov,
                                       std::size_t n, double c) {
    std::vector<double> a(n * n);
    for (std::size_t i = 0; i < n * n; ++i) a[i] = c * cov[i];
    double maxdiag = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        maxdiag = std::max(maxdiag, std::abs(a[i * n + i]));
    }
    const double tol = 1e-12 * maxdiag;

    std::vector<double> l(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (d < -tol) {
            throw CholeskyFailure(
                "covariance is not positive semidefinite (pivot " +
                std::to_string(d) + " at index " + std::to_string(j) + ")");
        }
        if (d <= tol) continue;  // degenerate direction, column stays zero
        const double root = std::sqrt(d);
        l[j * n + j] = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / root;
        }
    }
    return l;
}

SigmaSet make_sigma_points(const GaussianBelief& belief, double kappa) {
    const std::size_t n = belief.dim();
    check_symmetric(belief.cov, n);
    const double c = static_cast<double>(n) + kappa;
    if (!(c > 0.0)) {
        throw ValidationError("sigma point scaling n + kappa must be positive");
    }
    const std::vector<double> l = scaled_sqrt_factor(belief.cov, n, c);

    SigmaSet set;
    set.kappa = kappa;
    set.points.reserve(2 * n + 1);
    set.weights.reserve(2 * n + 1);
    set.points.push_back(belief.mean);
    set.weights.push_back(kappa / c);
    for (int sign : {+1, -1}) {
        for (std::size_t j = 0; j < n; ++j) {
            std::vector<double> p = belief.mean;
            for (std::size_t i = 0; i < n; ++i) {
                p[i] += sign * l[i * n + j];
            }
            set.points.push_back(std::move(p));
            set.weights.push_back(0.5 / c);
        }
    }
    return set;
}

GaussianBelief linear_transform(const SymbolTable& table,
                                const std::vector<MtpExpr>& outputs,
                                const std::vector<SymbolId>& args,
                                const GaussianBelief& belief) {
    const std::size_t n = belief.dim();
    const std::size_t m = outputs.size();
    check_symmetric(belief.cov, n);
    check_bound(table, outputs, args);

    std::vector<double> scratch(table.size(), 0.0);
    GaussianBelief out;
    out.mean = eval_outputs(outputs, args, belief.mean, scratch);

    std::vector<double> jac(m * n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            jac[i * n + j] = outputs[i].derivative(args[j]).eval(scratch);
        }
    }
    // J cov J^T, through tmp = J cov
    std::vector<double> tmp(m * n, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double jik = jac[i * n + k];
            if (jik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                tmp[i * n + j] += jik * belief.cov[k * n + j];
            }
        }
    }
    out.cov.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                s += tmp[i * n + k] * jac[j * n + k];
            }
            out.cov[i * m + j] = s;
            out.cov[j * m + i] = s;
        }
    }
    return out;
}

GaussianBelief unscented_transform(const SymbolTable& table,
                                   const std::vector<MtpExpr>& outputs,
                                   const std::vector<SymbolId>& args,
                                   const GaussianBelief& belief, double kappa) {
    const std::size_t m = outputs.size();
    check_bound(table, outputs, args);
    const SigmaSet set = make_sigma_points(belief, kappa);

    std::vector<double> scratch(table.size(), 0.0);
    std::vector<std::vector<double>> pushed;
    pushed.reserve(set.points.size());
    for (const auto& p : set.points) {
        pushed.push_back(eval_outputs(outputs, args, p, scratch));
    }

    GaussianBelief out;
    out.mean.assign(m, 0.0);
    for (std::size_t i = 0; i < pushed.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            out.mean[j] += set.weights[i] * pushed[i][j];
        }
    }
    out.cov.assign(m * m, 0.0);
    for (std::size_t i = 0; i < pushed.size(); ++i) {
        const double w = set.weights[i];
        for (std::size_t r = 0; r < m; ++r) {
            const double dr = pushed[i][r] - out.mean[r];
            for (std::size_t s = 0; s <= r; ++s) {
                out.cov[r * m + s] += w * dr * (pushed[i][s] - out.mean[s]);
            }
        }
    }
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t s = 0; s < r; ++s) {
            out.cov[s * m + r] = out.cov[r * m + s];
        }
    }
    return out;
}

GaussianBelief initial_state_belief(const SystemSpec& spec) {
    std::vector<const Distribution*> laws;
    laws.reserve(spec.initial.size());
    for (const auto& law : spec.initial) laws.push_back(&law);
    return moment_matched_belief(laws);
}

GaussianBelief linear_step(const SystemSpec& spec, const GaussianBelief& belief,
                           int k) {
    return linear_transform(spec.table, step_outputs(spec, k),
                            stacked_args(spec), stacked_belief(spec, belief, k));
}

GaussianBelief unscented_step(const SystemSpec& spec,
                              const GaussianBelief& belief, int k,
                              std::optional<double> kappa) {
    const GaussianBelief z = stacked_belief(spec, belief, k);
    const double kap = kappa ? *kappa : default_kappa(z.dim());
    return unscented_transform(spec.table, step_outputs(spec, k),
                               stacked_args(spec), z, kap);
}

std::vector<GaussianBelief> linear_trajectory(const SystemSpec& spec) {
    spec.validate();
    std::vector<GaussianBelief> out;
    out.reserve(spec.horizon + 1);
    out.push_back(initial_state_belief(spec));
    for (int k = 0; k < spec.horizon; ++k) {
        out.push_back(linear_step(spec, out.back(), k));
    }
    return out;
}

std::vector<GaussianBelief> unscented_trajectory(const SystemSpec& spec,
                                                 std::optional<double> kappa) {
    spec.validate();
    std::vector<GaussianBelief> out;
    out.reserve(spec.horizon + 1);
    out.push_back(initial_state_belief(spec));
    for (int k = 0; k < spec.horizon; ++k) {
        out.push_back(unscented_step(spec, out.back(), k, kappa));
    }
    return out;
}

SampleMomentTrajectory monte_carlo(const SystemSpec& spec,
                                   const std::vector<SymbolId>& targets,
                                   const std::vector<int>& orders,
                                   std::size_t sample_count,
                                   std::uint64_t seed) {
    spec.validate();
    if (sample_count < 2) {
        throw ValidationError("Monte Carlo needs at least two samples");
    }
    std::vector<std::size_t> target_state(targets.size());
    for (std::size_t t = 0; t < targets.size(); ++t) {
        const auto idx = spec.state_index(targets[t]);
        if (!idx) {
            throw ValidationError("Monte Carlo target '" +
                                  spec.table.name(targets[t]) +
                                  "' is not a state");
        }
        target_state[t] = *idx;
    }
    for (int a : orders) {
        if (a < 1) throw ValidationError("moment order must be at least 1");
    }

    const std::size_t nx = spec.states.size();
    const std::size_t nw = spec.disturbances.size();
    const int n_steps = spec.horizon;
    const std::size_t per_k = targets.size() * orders.size();
    const std::size_t cells = static_cast<std::size_t>(n_steps + 1) * per_k;

    // Per-cell running block accumulators and finished block sums; blocks are
    // a fixed sample-index partition, so the reduction order never depends on
    // scheduling.
    std::vector<double> acc_v(cells, 0.0), acc_v2(cells, 0.0);
    std::vector<std::vector<double>> blocks_v(cells), blocks_v2(cells);

    std::vector<double> vals(spec.table.size(), 0.0);
    std::vector<double> x(nx), x_next(nx);

    const auto record = [&](int k) {
        std::size_t cell = static_cast<std::size_t>(k) * per_k;
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const double base = x[target_state[t]];
            for (std::size_t o = 0; o < orders.size(); ++o, ++cell) {
                const double v = int_pow(base, orders[o]);
                acc_v[cell] += v;
                acc_v2[cell] += v * v;
            }
        }
    };
    const auto flush = [&]() {
        for (std::size_t cell = 0; cell < cells; ++cell) {
            blocks_v[cell].push_back(acc_v[cell]);
            blocks_v2[cell].push_back(acc_v2[cell]);
            acc_v[cell] = 0.0;
            acc_v2[cell] = 0.0;
        }
    };

    for (std::size_t i = 0; i < sample_count; ++i) {
        Rng rng(seed, i);
        for (std::size_t s = 0; s < nx; ++s) x[s] = spec.initial[s].sample(rng);
        record(0);
        for (int k = 0; k < n_steps; ++k) {
            for (std::size_t s = 0; s < nx; ++s) vals[spec.states[s]] = x[s];
            for (std::size_t d = 0; d < nw; ++d) {
                vals[spec.disturbances[d]] = spec.noise_law(d, k).sample(rng);
            }
            for (std::size_t c = 0; c < spec.controls.size(); ++c) {
                vals[spec.controls[c]] = spec.control_value(c, k);
            }
            for (std::size_t s = 0; s < nx; ++s) {
                x_next[s] = spec.updates[s].eval(vals);
            }
            x.swap(x_next);
            record(k + 1);
        }
        if ((i + 1) % kBlockSize == 0) flush();
    }
    if (sample_count % kBlockSize != 0) flush();

    SampleMomentTrajectory out;
    out.targets = targets;
    out.orders = orders;
    out.sample_count = sample_count;
    out.values.assign(n_steps + 1, std::vector<double>(per_k, 0.0));
    out.std_errs.assign(n_steps + 1, std::vector<double>(per_k, 0.0));
    const double ns = static_cast<double>(sample_count);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        const int k = static_cast<int>(cell / per_k);
        const std::size_t j = cell % per_k;
        const double m1 =
            pairwise_sum(blocks_v[cell].data(), blocks_v[cell].size()) / ns;
        const double m2 =
            pairwise_sum(blocks_v2[cell].data(), blocks_v2[cell].size()) / ns;
        out.values[k][j] = m1;
        out.std_errs[k][j] = std::sqrt(std::max(0.0, m2 - m1 * m1) / ns);
    }
    return out;
}

}  // namespace momentprop
