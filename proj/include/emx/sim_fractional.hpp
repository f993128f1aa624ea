#pragma once

#include "emx/params.hpp"
#include "emx/signal.hpp"
#include "emx/sim_continuous.hpp"
#include "emx/trajectory.hpp"

namespace emx {

/// Fractional orders and price-law coefficients for the frequency-coupled
/// model variant.  Orders live in (0, 1] and are separate from the response
/// rates alpha, beta in MarketParams, which appear as diagonal matrices on
/// the left of the fractional operator:
///   alpha_i D^{ord_alpha[i]} S_i = lambda - (a_i + b_i S_i)
///   beta_j  D^{ord_beta[j]}  D_j = (c_j - d_j D_j) - lambda
///   D^{ord_gamma} lambda = -H_d * lambda + K_E * (omega_ref - omega_coi(t))
/// while E integrates the classical balance dE = 1'S - 1'D.
struct FractionalSpec {
  Vec ord_alpha;       // size m, entries in (0, 1]
  Vec ord_beta;        // size n, entries in (0, 1]
  double ord_gamma = 1.0;
  double H_d = 0.0;    // price damping, >= 0
  double K_E = 0.0;    // frequency-deviation gain
  double omega_ref = 0.0;
  PiecewiseConstantSignal omega_coi;
  /// Keep only the most recent history_limit terms of the memory sum;
  /// 0 means the full history (the default).
  Index history_limit = 0;
};

void validate(const MarketParams& mp, const FractionalSpec& fs);

/// Grunwald-Letnikov weights w_0..w_{n_steps} for a Caputo derivative of the
/// given order: w_0 = 1, w_j = w_{j-1} * (1 - (order+1)/j).  For order 1 the
/// sequence collapses to 1, -1, 0, 0, ...
Vec caputo_weights(double order, Index n_steps);

/// Fixed-step Grunwald-Letnikov scheme.  The memory sum runs over y - y0
/// so the initial condition enters as in the Caputo definition; with every
/// order equal to 1 the iteration is bit-identical to explicit Euler on the
/// same right-hand side.  Cost grows quadratically with the step count
/// unless fs.history_limit truncates the sum.
Trajectory simulate_fractional(const MarketParams& mp, const FractionalSpec& fs,
                               const MarketState& x0, const StepperConfig& cfg);

}  // namespace emx
