#pragma once

#include <memory>
#include <vector>

#include "momentprop/monomial.hpp"
#include "momentprop/system.hpp"
#include "momentprop/trig_moment.hpp"

// Deterministic propagation of moments of any order through an augmented
// linear-state system: one linear recursion per order, with the per-step
// matrices assembled from mixed trig moments of the disturbances.

namespace momentprop {

struct MomentSystem {
    int alpha = 1;
    MonomialBasis basis;  // degree-alpha monomials over the functionals
    // one matrix per time step, row-major dim x dim; steps with identical
    // controls and noise laws share storage
    std::vector<std::shared_ptr<const std::vector<double>>> step_matrices;

    std::size_t dim() const { return basis.size(); }
};

// Assemble A(k) for k = 0..spec.horizon-1: expand each degree-alpha monomial
// of the functional updates, substitute the step's controls, take the
// expectation over the step's noise laws, and scatter the surviving
// coefficients against the same basis.
MomentSystem build_moment_system(const AugmentedSystem& aug, int alpha,
                                 const SystemSpec& spec,
                                 const TrigMomentEngine& engine);

// Moments of every basis monomial at k = 0, from the independent per-state
// initial laws.
std::vector<double> initial_moment_vector(const AugmentedSystem& aug,
                                          const MonomialBasis& basis,
                                          const SystemSpec& spec,
                                          const TrigMomentEngine& engine);

struct OrderTrajectory {
    int alpha = 1;
    MonomialBasis basis;
    // values[k] aligned to basis, k = 0..N
    std::vector<std::vector<double>> values;
};

struct PropagationResult {
    AugmentedSystem aug;
    std::vector<OrderTrajectory> orders;

    const OrderTrajectory& order(int alpha) const;
};

PropagationResult propagate_recursive(const SystemSpec& spec,
                                      const std::vector<SymbolId>& targets,
                                      const std::vector<int>& orders,
                                      const TrigMomentEngine& engine);

// The moment sequence E[prod_i s_i^{p_i}](k) for k = 0..N; every s_i must be
// a basis functional of the propagated system and the total degree must be
// one of the propagated orders.
std::vector<double> extract_state_moments(
    const PropagationResult& result,
    const std::vector<std::pair<SymbolId, int>>& powers);

// Symbolic N-fold composition of the dynamics followed by one pushforward
// per target and order; exact but exponential in N, intended for short
// horizons.  Returns values[target][order_index] at k = N.
std::vector<std::vector<double>> propagate_direct(
    const SystemSpec& spec, const std::vector<SymbolId>& targets,
    const std::vector<int>& orders, const TrigMomentEngine& engine);

}  // namespace momentprop
