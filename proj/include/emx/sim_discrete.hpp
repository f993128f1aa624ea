#pragma once

#include "emx/params.hpp"
#include "emx/trajectory.hpp"

namespace emx {

/// One synchronous update of the discrete-time model with step dt: every
/// component advances from the same snapshot,
///   S_i+ = S_i + (dt * alpha_i) * (lambda - (a_i + b_i S_i))
///   D_j+ = D_j + (dt * beta_j) * ((c_j - d_j D_j) - lambda)
///   E+   = E + dt * (1'S - 1'D)
///   lambda+ = lambda + (-(dt * k_price) * E + (dt * h_gain) * (lambda0 - lambda)).
MarketState step_discrete(const MarketParams& mp, const MarketState& s, double dt);

/// Iterates step_discrete n_steps times.  Step-for-step bit-identical to
/// simulate_ode with the ExplicitEuler method and the same dt.
Trajectory simulate_discrete(const MarketParams& mp, const MarketState& x0, double dt,
                             Index n_steps);

/// Discrete model where every update sums contributions from the last p+1
/// samples with the per-lag weights of mem (which absorb the time step):
///   S_i(k+1) = S_i(k) + sum_l w_alpha(l,i) * (lambda(k-l) - (a_i + b_i S_i(k-l)))
///   E(k+1)   = E(k) + lag_step * sum_l (1'S(k-l) - 1'D(k-l))
///   lambda(k+1) = lambda(k) + sum_l (-w_k[l] * E(k-l) + w_h[l] * (lambda0 - lambda(k-l)))
/// and analogously for D.  Samples before the start repeat x0.  One step
/// advances time by mem.lag_step.  With p = 0 and weights dt*alpha, dt*beta,
/// dt*k_price, dt*h_gain this is bit-identical to simulate_discrete.
Trajectory simulate_discrete_memory(const MarketParams& mp, const MemorySpec& mem,
                                    const MarketState& x0, Index n_steps);

}  // namespace emx
