#pragma once

#include <vector>

#include "emx/params.hpp"
#include "emx/trajectory.hpp"

namespace emx {

enum class StepperMethod { ExplicitEuler, RK4 };

struct StepperConfig {
  StepperMethod method = StepperMethod::RK4;
  double dt = 0.0;
  double t_end = 0.0;  // must be >= dt; the run covers [0, n*dt], n = round(t_end/dt)
};

/// Time derivative of a MarketState.
struct StateRate {
  Vec dS;
  Vec dD;
  double dE = 0.0;
  double dlambda = 0.0;
};

/// Right-hand side of the full model:
///   dS_i = alpha_i * (lambda - (a_i + b_i S_i))
///   dD_j = beta_j  * ((c_j - d_j D_j) - lambda)
///   dE   = 1'S - 1'D
///   dlambda = -k_price * E + h_gain * (lambda0 - lambda)
StateRate rhs_full(const MarketParams& mp, const MarketState& s);

/// Integrates the full model from x0.  ExplicitEuler applies the additive
/// update formulas directly (bit-identical to the discrete model with the
/// same step); RK4 is the accuracy default.  Throws SimulationAbort when a
/// state component becomes non-finite.
Trajectory simulate_ode(const MarketParams& mp, const MarketState& x0, const StepperConfig& cfg);

/// Integrates the balanced model where 1'S = 1'D is enforced and the price
/// is eliminated through the constraint derivative:
///   lambda = (sum alpha_i (a_i + b_i S_i) + sum beta_j (c_j - d_j D_j))
///            / (sum alpha_i + sum beta_j).
/// Each step ends with a minimum-norm projection back onto the constraint;
/// the stored lambda is recomputed from the projected state and E is 0.
/// x0 must satisfy |1'S - 1'D| <= 1e-9.
Trajectory simulate_dae_balanced(const MarketParams& mp, const MarketState& x0,
                                 const StepperConfig& cfg);

struct ZeroImbalanceRun {
  Trajectory traj;              // E is identically 0 in the stored states
  std::vector<double> imbalance;  // 1'S - 1'D at every step, logged not enforced
};

/// Integrates the variant that assumes the market never accumulates
/// imbalance: dlambda = h_gain * (lambda0 - lambda) and no E state.  The
/// assumption is overdetermined for general data, so the actual imbalance is
/// logged alongside the trajectory instead of being forced to zero.
ZeroImbalanceRun simulate_zero_imbalance(const MarketParams& mp, const MarketState& x0,
                                         const StepperConfig& cfg);

/// Samples at t0, t0 - lag_step, ..., t0 - depth*lag_step used as the
/// pre-initial history of a delayed run.  states[l] is the sample at lag l.
struct HistoryBuffer {
  double lag_step = 0.0;
  std::vector<MarketState> states;

  /// Constant history: every sample equals x0.
  static HistoryBuffer constant(const MarketState& x0, double lag_step, Index depth);
};

/// Integrates the delayed model where producer, consumer and price updates
/// read state at lags 0..p (weights in mem are rates; lag 0 is the live
/// state) while dE reads the present:
///   dS_i = sum_l w_alpha(l,i) * (lambda(t - l L) - (a_i + b_i S_i(t - l L)))
/// and analogously for D and lambda, with L = mem.lag_step.
///
/// cfg.dt must divide lag_step so lagged reads land on stored steps; times
/// before t0 read the history buffer, held constant between its samples.
/// RK4 stages hold the lagged terms at their step-start values.
Trajectory simulate_delay(const MarketParams& mp, const MemorySpec& mem,
                          const HistoryBuffer& history, const StepperConfig& cfg);

void validate(const StepperConfig& cfg);

/// Number of steps n with n * dt covering t_end; throws ValidationError when
/// dt does not divide t_end to within 1e-9 relative.
Index step_count(const StepperConfig& cfg);

}  // namespace emx
