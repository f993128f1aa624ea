#include "emx/sim_discrete.hpp"

#include <cmath>
#include <sstream>

#include "emx/detail/step_kernel.hpp"
#include "emx/errors.hpp"

namespace emx {

MarketState step_discrete(const MarketParams& mp, const MarketState& s, double dt) {
  if (!std::isfinite(dt) || dt < 0.0) throw ValidationError("dt must be finite and >= 0");
  return detail::synchronous_step(mp, s, dt);
}

namespace {

void abort_if_not_finite(const MarketState& s, std::size_t step) {
  if (!all_finite(s)) {
    std::ostringstream os;
    os << "state became non-finite at step " << step;
    throw SimulationAbort(os.str(), step);
  }
}

}  // namespace

Trajectory simulate_discrete(const MarketParams& mp, const MarketState& x0, double dt,
                             Index n_steps) {
  validate(mp);
  validate(mp, x0);
  if (!std::isfinite(dt) || dt <= 0.0) throw ValidationError("dt must be finite and > 0");
  if (n_steps < 0) throw ValidationError("n_steps must be >= 0");

  Trajectory traj;
  traj.dt = dt;
  traj.meta.family = "discrete";
  traj.meta.fingerprint = fingerprint(mp);
  traj.states.reserve(n_steps + 1);
  traj.states.push_back(x0);
  const double t0 = x0.t;
  for (Index k = 0; k < n_steps; ++k) {
    MarketState next = detail::synchronous_step(mp, traj.states.back(), dt);
    next.t = t0 + static_cast<double>(k + 1) * dt;
    abort_if_not_finite(next, static_cast<std::size_t>(k) + 1);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

Trajectory simulate_discrete_memory(const MarketParams& mp, const MemorySpec& mem,
                                    const MarketState& x0, Index n_steps) {
  validate(mp, mem);
  validate(mp, x0);
  if (n_steps < 0) throw ValidationError("n_steps must be >= 0");

  Trajectory traj;
  traj.dt = mem.lag_step;
  traj.meta.family = "discrete_memory";
  traj.meta.fingerprint = fingerprint(mp);
  traj.states.reserve(n_steps + 1);
  traj.states.push_back(x0);

  // Reads before the start repeat x0, which sits at index 0 anyway.
  auto lagged = [&](Index k, Index l) -> const MarketState& {
    return traj.states[static_cast<std::size_t>(std::max<Index>(k - l, 0))];
  };

  const double t0 = x0.t;
  for (Index k = 0; k < n_steps; ++k) {
    const MarketState& cur = traj.states.back();
    MarketState next;
    next.S.resize(mp.m);
    next.D.resize(mp.n);
    for (Index i = 0; i < mp.m; ++i) {
      double acc = 0.0;
      for (Index l = 0; l <= mem.p; ++l) {
        const MarketState& xl = lagged(k, l);
        acc += mem.w_alpha(l, i) * producer_gap(mp, i, xl.S[i], xl.lambda);
      }
      next.S[i] = cur.S[i] + acc;
    }
    for (Index j = 0; j < mp.n; ++j) {
      double acc = 0.0;
      for (Index l = 0; l <= mem.p; ++l) {
        const MarketState& xl = lagged(k, l);
        acc += mem.w_beta(l, j) * consumer_gap(mp, j, xl.D[j], xl.lambda);
      }
      next.D[j] = cur.D[j] + acc;
    }
    {
      double acc = 0.0;
      for (Index l = 0; l <= mem.p; ++l) {
        const MarketState& xl = lagged(k, l);
        acc += net_imbalance(xl.S, xl.D);
      }
      next.E = cur.E + mem.lag_step * acc;
    }
    {
      double acc = 0.0;
      for (Index l = 0; l <= mem.p; ++l) {
        const MarketState& xl = lagged(k, l);
        acc += -mem.w_k[l] * xl.E + mem.w_h[l] * (mp.lambda0 - xl.lambda);
      }
      next.lambda = cur.lambda + acc;
    }
    next.t = t0 + static_cast<double>(k + 1) * mem.lag_step;
    abort_if_not_finite(next, static_cast<std::size_t>(k) + 1);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace emx
