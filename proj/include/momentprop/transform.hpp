#pragma once

#include <vector>

#include "momentprop/expr.hpp"
#include "momentprop/trig_moment.hpp"

// Moments of random variables obtained by pushing a known scalar law through
// a nonlinear map, computed in closed form from CF derivatives rather than by
// sampling or local approximation.

namespace momentprop {

// E[x^a y^b] for the Cartesian image of an uncertain polar measurement
//   x = (r* + w_r) cos(t* + w_t),  y = (r* + w_r) sin(t* + w_t)
// with w_r, w_t independent.  The radial part reduces to a binomial sum of
// raw moments, the angular part to a single mixed trig moment at phase t*.
double polar_to_cartesian_moment(const Distribution& radial_noise,
                                 const Distribution& angle_noise, double r_star,
                                 double theta_star, int x_pow, int y_pow,
                                 const TrigMomentEngine& engine);

// E[f^order] where every symbol appearing in f is an independent random
// variable.  Symbols must be declared with disturbance kind and bound in
// dist_by_symbol; anything else raises UnboundSymbol.
double pushforward_moment(const MtpExpr& f, const SymbolTable& table,
                          const std::vector<const Distribution*>& dist_by_symbol,
                          int order, const TrigMomentEngine& engine);

}  // namespace momentprop
