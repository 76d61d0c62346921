#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "momentprop/system.hpp"

// Reference uncertainty-propagation methods used for benchmarking: mean and
// covariance through a linearized model, the unscented transform, and plain
// Monte Carlo simulation.
//
// The linear and unscented routines summarize every input law by its true
// mean and variance, so non-Gaussian inputs enter as moment-matched Gaussian
// beliefs.  Both step wrappers stack states and the step's disturbances into
// one vector with block-diagonal covariance and push the stacked belief
// through the update expressions, which handles non-additive noise; for
// additive noise this reduces to the familiar A P A^T + Q update.

namespace momentprop {

struct GaussianBelief {
    std::vector<double> mean;
    std::vector<double> cov;  // row-major dim x dim, symmetric

    std::size_t dim() const { return mean.size(); }
    double cov_at(std::size_t i, std::size_t j) const {
        return cov[i * mean.size() + j];
    }
};

struct SigmaSet {
    std::vector<std::vector<double>> points;  // 2*dim+1, point 0 is the mean
    std::vector<double> weights;              // sums to 1
    double kappa = 0.0;
};

// Conventional scaling: kappa = 3 - n, which keeps n + kappa = 3 regardless
// of how many degenerate dimensions the stacked vector carries.
double default_kappa(std::size_t n);

// Diagonal belief matching the means and variances of independent laws.
GaussianBelief moment_matched_belief(const std::vector<const Distribution*>& laws);

// Lower-triangular L with L L^T = c * cov, by Cholesky with pivot tolerance
// 1e-12 relative to the largest diagonal: pivots within tolerance of zero
// zero out their column, pivots below -tolerance raise CholeskyFailure.
// Column i of L is the i-th sigma offset direction.
std::vector<double> scaled_sqrt_factor(const std::vector<double>& cov,
                                       std::size_t n, double c);

SigmaSet make_sigma_points(const GaussianBelief& belief, double kappa);

// Push a belief through the map y = outputs(z), where belief coordinate i
// binds symbol args[i].  Any other symbol in the outputs raises
// UnboundSymbol.  Linear: mean through the map, covariance J cov J^T with
// the Jacobian taken analytically at the mean.  Unscented: sigma points
// pushed through the map and recombined.
GaussianBelief linear_transform(const SymbolTable& table,
                                const std::vector<MtpExpr>& outputs,
                                const std::vector<SymbolId>& args,
                                const GaussianBelief& belief);
GaussianBelief unscented_transform(const SymbolTable& table,
                                   const std::vector<MtpExpr>& outputs,
                                   const std::vector<SymbolId>& args,
                                   const GaussianBelief& belief, double kappa);

// Belief over the states at k = 0, from the initial laws.
GaussianBelief initial_state_belief(const SystemSpec& spec);

// One step of the system: substitute the step's controls, stack the state
// belief with the step's moment-matched noise laws, push through the updates.
GaussianBelief linear_step(const SystemSpec& spec, const GaussianBelief& belief,
                           int k);
GaussianBelief unscented_step(const SystemSpec& spec,
                              const GaussianBelief& belief, int k,
                              std::optional<double> kappa = std::nullopt);

// Beliefs at k = 0..horizon.
std::vector<GaussianBelief> linear_trajectory(const SystemSpec& spec);
std::vector<GaussianBelief> unscented_trajectory(
    const SystemSpec& spec, std::optional<double> kappa = std::nullopt);

// Sample moments of state powers from simulated rollouts.
struct SampleMomentTrajectory {
    std::vector<SymbolId> targets;
    std::vector<int> orders;
    std::size_t sample_count = 0;
    // values[k][t * orders.size() + o] = mean of targets[t]^orders[o] at k
    std::vector<std::vector<double>> values;
    std::vector<std::vector<double>> std_errs;

    double value_at(int k, std::size_t target, std::size_t order_index) const {
        return values.at(k).at(target * orders.size() + order_index);
    }
    double stderr_at(int k, std::size_t target, std::size_t order_index) const {
        return std_errs.at(k).at(target * orders.size() + order_index);
    }
};

// sample_count rollouts with one RNG stream per sample index, so the result
// is a pure function of (spec, targets, orders, sample_count, seed).  Sample
// sums are reduced in fixed 65536-sample blocks combined pairwise.
SampleMomentTrajectory monte_carlo(const SystemSpec& spec,
                                   const std::vector<SymbolId>& targets,
                                   const std::vector<int>& orders,
                                   std::size_t sample_count,
                                   std::uint64_t seed);

}  // namespace momentprop
