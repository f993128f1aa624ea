#include "emx/sim_continuous.hpp"

#include <cmath>
#include <sstream>

#include "emx/detail/step_kernel.hpp"
#include "emx/errors.hpp"

namespace emx {

void validate(const StepperConfig& cfg) {
  if (!std::isfinite(cfg.dt) || cfg.dt <= 0.0)
    throw ValidationError("dt must be finite and > 0");
  if (!std::isfinite(cfg.t_end) || cfg.t_end < cfg.dt)
    throw ValidationError("t_end must be finite and >= dt");
}

Index step_count(const StepperConfig& cfg) {
  validate(cfg);
  const auto n = static_cast<Index>(std::llround(cfg.t_end / cfg.dt));
  if (n < 1 || std::abs(static_cast<double>(n) * cfg.dt - cfg.t_end) >
                   1e-9 * std::max(1.0, std::abs(cfg.t_end)))
    throw ValidationError("t_end must be an integer multiple of dt");
  return n;
}

namespace {

MarketState advance(const MarketState& x, const StateRate& r, double h) {
  MarketState out;
  out.t = x.t + h;
  out.S.resize(x.S.size());
  out.D.resize(x.D.size());
  for (Index i = 0; i < x.S.size(); ++i) out.S[i] = x.S[i] + h * r.dS[i];
  for (Index j = 0; j < x.D.size(); ++j) out.D[j] = x.D[j] + h * r.dD[j];
  out.E = x.E + h * r.dE;
  out.lambda = x.lambda + h * r.dlambda;
  return out;
}

StateRate combine_rk4(const StateRate& k1, const StateRate& k2, const StateRate& k3,
                      const StateRate& k4) {
  StateRate kc;
  kc.dS.resize(k1.dS.size());
  kc.dD.resize(k1.dD.size());
  for (Index i = 0; i < k1.dS.size(); ++i)
    kc.dS[i] = (k1.dS[i] + 2.0 * k2.dS[i] + 2.0 * k3.dS[i] + k4.dS[i]) / 6.0;
  for (Index j = 0; j < k1.dD.size(); ++j)
    kc.dD[j] = (k1.dD[j] + 2.0 * k2.dD[j] + 2.0 * k3.dD[j] + k4.dD[j]) / 6.0;
  kc.dE = (k1.dE + 2.0 * k2.dE + 2.0 * k3.dE + k4.dE) / 6.0;
  kc.dlambda = (k1.dlambda + 2.0 * k2.dlambda + 2.0 * k3.dlambda + k4.dlambda) / 6.0;
  return kc;
}

template <class F>
MarketState rk4_step(const MarketState& x, double dt, F&& f) {
  const StateRate k1 = f(x);
  const StateRate k2 = f(advance(x, k1, 0.5 * dt));
  const StateRate k3 = f(advance(x, k2, 0.5 * dt));
  const StateRate k4 = f(advance(x, k3, dt));
  return advance(x, combine_rk4(k1, k2, k3, k4), dt);
}

void abort_if_not_finite(const MarketState& s, std::size_t step) {
  if (!all_finite(s)) {
    std::ostringstream os;
    os << "state became non-finite at step " << step;
    throw SimulationAbort(os.str(), step);
  }
}

// Runs a fixed-step loop, restamping times as t0 + k*dt so they never drift.
template <class Step>
Trajectory integrate(const MarketState& x0, const StepperConfig& cfg, const char* family,
                     std::uint64_t fp, Step&& one_step) {
  const Index n = step_count(cfg);
  Trajectory traj;
  traj.dt = cfg.dt;
  traj.meta.family = family;
  traj.meta.fingerprint = fp;
  traj.states.reserve(n + 1);
  traj.states.push_back(x0);
  const double t0 = x0.t;
  for (Index k = 0; k < n; ++k) {
    MarketState next = one_step(traj.states.back(), k);
    next.t = t0 + static_cast<double>(k + 1) * cfg.dt;
    abort_if_not_finite(next, static_cast<std::size_t>(k) + 1);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace

StateRate rhs_full(const MarketParams& mp, const MarketState& s) {
  StateRate r;
  r.dS.resize(mp.m);
  r.dD.resize(mp.n);
  for (Index i = 0; i < mp.m; ++i)
    r.dS[i] = mp.alpha[i] * producer_gap(mp, i, s.S[i], s.lambda);
  for (Index j = 0; j < mp.n; ++j)
    r.dD[j] = mp.beta[j] * consumer_gap(mp, j, s.D[j], s.lambda);
  r.dE = net_imbalance(s.S, s.D);
  r.dlambda = -mp.k_price * s.E + mp.h_gain * (mp.lambda0 - s.lambda);
  return r;
}

Trajectory simulate_ode(const MarketParams& mp, const MarketState& x0,
                        const StepperConfig& cfg) {
  validate(mp);
  validate(mp, x0);
  if (cfg.method == StepperMethod::ExplicitEuler) {
    return integrate(x0, cfg, "continuous", fingerprint(mp),
                     [&](const MarketState& x, Index) {
                       return detail::synchronous_step(mp, x, cfg.dt);
                     });
  }
  return integrate(x0, cfg, "continuous", fingerprint(mp), [&](const MarketState& x, Index) {
    return rk4_step(x, cfg.dt, [&](const MarketState& y) { return rhs_full(mp, y); });
  });
}

namespace {

double dae_price(const MarketParams& mp, const Vec& S, const Vec& D) {
  double num = 0.0;
  for (Index i = 0; i < mp.m; ++i) num += mp.alpha[i] * (mp.a[i] + mp.b[i] * S[i]);
  for (Index j = 0; j < mp.n; ++j) num += mp.beta[j] * (mp.c[j] - mp.d[j] * D[j]);
  return num / (mp.alpha.sum() + mp.beta.sum());
}

}  // namespace

Trajectory simulate_dae_balanced(const MarketParams& mp, const MarketState& x0,
                                 const StepperConfig& cfg) {
  validate(mp);
  validate(mp, x0);
  const double r0 = net_imbalance(x0.S, x0.D);
  if (std::abs(r0) > 1e-9) {
    std::ostringstream os;
    os << "x0 violates the balance constraint: 1'S - 1'D = " << r0;
    throw ValidationError(os.str());
  }

  // Price eliminated through the differentiated constraint; E has no state.
  auto rhs = [&](const MarketState& y) {
    StateRate r;
    r.dS.resize(mp.m);
    r.dD.resize(mp.n);
    const double lambda = dae_price(mp, y.S, y.D);
    for (Index i = 0; i < mp.m; ++i)
      r.dS[i] = mp.alpha[i] * producer_gap(mp, i, y.S[i], lambda);
    for (Index j = 0; j < mp.n; ++j)
      r.dD[j] = mp.beta[j] * consumer_gap(mp, j, y.D[j], lambda);
    r.dE = 0.0;
    r.dlambda = 0.0;
    return r;
  };

  auto project = [&](MarketState s) {
    const double share = net_imbalance(s.S, s.D) / static_cast<double>(mp.m + mp.n);
    for (Index i = 0; i < mp.m; ++i) s.S[i] -= share;
    for (Index j = 0; j < mp.n; ++j) s.D[j] += share;
    if (std::abs(net_imbalance(s.S, s.D)) > 1e-8)
      throw SimulationAbort("constraint projection failed", 0);
    s.E = 0.0;
    s.lambda = dae_price(mp, s.S, s.D);
    return s;
  };

  MarketState start = project(x0);
  start.t = x0.t;
  return integrate(start, cfg, "balanced_dae", fingerprint(mp),
                   [&](const MarketState& x, Index) {
                     MarketState next = cfg.method == StepperMethod::ExplicitEuler
                                            ? advance(x, rhs(x), cfg.dt)
                                            : rk4_step(x, cfg.dt, rhs);
                     return project(std::move(next));
                   });
}

ZeroImbalanceRun simulate_zero_imbalance(const MarketParams& mp, const MarketState& x0,
                                         const StepperConfig& cfg) {
  validate(mp);
  validate(mp, x0);

  // The balance assumption leaves no E state; the price relaxes to lambda0 on
  // its own.  The residual 1'S - 1'D is recorded, not enforced.
  auto rhs = [&](const MarketState& y) {
    StateRate r;
    r.dS.resize(mp.m);
    r.dD.resize(mp.n);
    for (Index i = 0; i < mp.m; ++i)
      r.dS[i] = mp.alpha[i] * producer_gap(mp, i, y.S[i], y.lambda);
    for (Index j = 0; j < mp.n; ++j)
      r.dD[j] = mp.beta[j] * consumer_gap(mp, j, y.D[j], y.lambda);
    r.dE = 0.0;
    r.dlambda = mp.h_gain * (mp.lambda0 - y.lambda);
    return r;
  };

  MarketState start = x0;
  start.E = 0.0;
  ZeroImbalanceRun run;
  run.traj = integrate(start, cfg, "zero_imbalance", fingerprint(mp),
                       [&](const MarketState& x, Index) {
                         return cfg.method == StepperMethod::ExplicitEuler
                                    ? advance(x, rhs(x), cfg.dt)
                                    : rk4_step(x, cfg.dt, rhs);
                       });
  run.imbalance.reserve(run.traj.states.size());
  for (const MarketState& s : run.traj.states)
    run.imbalance.push_back(net_imbalance(s.S, s.D));
  return run;
}

HistoryBuffer HistoryBuffer::constant(const MarketState& x0, double lag_step, Index depth) {
  HistoryBuffer hb;
  hb.lag_step = lag_step;
  hb.states.assign(static_cast<std::size_t>(depth), x0);
  return hb;
}

Trajectory simulate_delay(const MarketParams& mp, const MemorySpec& mem,
                          const HistoryBuffer& history, const StepperConfig& cfg) {
  validate(mp, mem);
  validate(cfg);
  if (history.states.empty()) throw ValidationError("history must contain the initial state");
  if (static_cast<Index>(history.states.size()) < mem.p + 1)
    throw ValidationError("history must cover lags 0..p");
  if (std::abs(history.lag_step - mem.lag_step) > 1e-12 * mem.lag_step)
    throw ValidationError("history lag_step must match the memory spec");
  for (const MarketState& s : history.states) validate(mp, s);

  const auto ratio = static_cast<Index>(std::llround(mem.lag_step / cfg.dt));
  if (ratio < 1 || std::abs(static_cast<double>(ratio) * cfg.dt - mem.lag_step) >
                       1e-9 * mem.lag_step)
    throw ValidationError("dt must divide lag_step so lagged reads hit stored steps");

  const MarketState& x0 = history.states.front();
  const Index n = step_count(cfg);
  Trajectory traj;
  traj.dt = cfg.dt;
  traj.meta.family = "delay";
  traj.meta.fingerprint = fingerprint(mp);
  traj.states.reserve(n + 1);
  traj.states.push_back(x0);

  // Sample at k - l*ratio steps; negative indices fall into the history
  // buffer, held constant from the nearest older sample.
  auto lagged = [&](Index k, Index l) -> const MarketState& {
    const Index idx = k - l * ratio;
    if (idx >= 0) return traj.states[static_cast<std::size_t>(idx)];
    const Index slot = std::min<Index>((l * ratio - k + ratio - 1) / ratio,
                                       static_cast<Index>(history.states.size()) - 1);
    return history.states[static_cast<std::size_t>(slot)];
  };

  auto make_rhs = [&](Index k) {
    return [&, k](const MarketState& live) {
      StateRate r;
      r.dS.resize(mp.m);
      r.dD.resize(mp.n);
      r.dS.setZero();
      r.dD.setZero();
      r.dlambda = 0.0;
      for (Index l = 0; l <= mem.p; ++l) {
        const MarketState& xl = l == 0 ? live : lagged(k, l);
        for (Index i = 0; i < mp.m; ++i)
          r.dS[i] += mem.w_alpha(l, i) * producer_gap(mp, i, xl.S[i], xl.lambda);
        for (Index j = 0; j < mp.n; ++j)
          r.dD[j] += mem.w_beta(l, j) * consumer_gap(mp, j, xl.D[j], xl.lambda);
        r.dlambda += -mem.w_k[l] * xl.E + mem.w_h[l] * (mp.lambda0 - xl.lambda);
      }
      r.dE = net_imbalance(live.S, live.D);
      return r;
    };
  };

  const double t0 = x0.t;
  for (Index k = 0; k < n; ++k) {
    auto rhs = make_rhs(k);
    const MarketState& x = traj.states.back();
    MarketState next = cfg.method == StepperMethod::ExplicitEuler
                           ? advance(x, rhs(x), cfg.dt)
                           : rk4_step(x, cfg.dt, rhs);
    next.t = t0 + static_cast<double>(k + 1) * cfg.dt;
    abort_if_not_finite(next, static_cast<std::size_t>(k) + 1);
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace emx
