#include "emx/sim_fractional.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "emx/errors.hpp"

namespace emx {

namespace {

void check_order(const char* field, double q) {
  if (!(q > 0.0) || !(q <= 1.0)) {
    std::ostringstream os;
    os << field << " must lie in (0, 1], got " << q;
    throw ValidationError(os.str());
  }
}

}  // namespace

void validate(const MarketParams& mp, const FractionalSpec& fs) {
  validate(mp);
  if (fs.ord_alpha.size() != mp.m || fs.ord_beta.size() != mp.n)
    throw ValidationError("fractional orders must match the market dimensions");
  for (Index i = 0; i < mp.m; ++i) check_order("ord_alpha", fs.ord_alpha[i]);
  for (Index j = 0; j < mp.n; ++j) check_order("ord_beta", fs.ord_beta[j]);
  check_order("ord_gamma", fs.ord_gamma);
  if (!std::isfinite(fs.H_d) || fs.H_d < 0.0)
    throw ValidationError("H_d must be finite and >= 0");
  if (!std::isfinite(fs.K_E)) throw ValidationError("K_E must be finite");
  if (!std::isfinite(fs.omega_ref)) throw ValidationError("omega_ref must be finite");
  if (fs.history_limit < 0) throw ValidationError("history_limit must be >= 0");
}

Vec caputo_weights(double order, Index n_steps) {
  check_order("order", order);
  if (n_steps < 0) throw ValidationError("n_steps must be >= 0");
  Vec w(n_steps + 1);
  w[0] = 1.0;
  for (Index j = 1; j <= n_steps; ++j)
    w[j] = w[j - 1] * (1.0 - (order + 1.0) / static_cast<double>(j));
  return w;
}

namespace {

// pow(dt, 1.0) is dt on every sane libm, but the order-1 reduction must be
// bit-exact, so take no chances.
double dt_pow(double dt, double order) {
  return order == 1.0 ? dt : std::pow(dt, order);
}

}  // namespace

Trajectory simulate_fractional(const MarketParams& mp, const FractionalSpec& fs,
                               const MarketState& x0, const StepperConfig& cfg) {
  validate(mp, fs);
  validate(mp, x0);
  const Index n = step_count(cfg);
  const double dt = cfg.dt;

  std::vector<Vec> wS(static_cast<std::size_t>(mp.m));
  std::vector<Vec> wD(static_cast<std::size_t>(mp.n));
  for (Index i = 0; i < mp.m; ++i)
    wS[static_cast<std::size_t>(i)] = caputo_weights(fs.ord_alpha[i], n);
  for (Index j = 0; j < mp.n; ++j)
    wD[static_cast<std::size_t>(j)] = caputo_weights(fs.ord_beta[j], n);
  const Vec wL = caputo_weights(fs.ord_gamma, n);

  const bool has_signal = !fs.omega_coi.times().empty();

  Trajectory traj;
  traj.dt = dt;
  traj.meta.family = "fractional";
  traj.meta.fingerprint = fingerprint(mp);
  traj.states.reserve(n + 1);
  traj.states.push_back(x0);

  // Caputo memory term for one scalar component: c1*(y_k - y0) plus the
  // weighted tail over earlier samples, truncated by history_limit.
  auto memory = [&](const Vec& w, auto&& sample, Index k) {
    const double y0 = sample(0);
    double acc = (1.0 + w[1]) * (sample(k) - y0);
    Index jmax = k + 1;
    if (fs.history_limit > 0) jmax = std::min<Index>(jmax, fs.history_limit);
    for (Index j = 2; j <= jmax; ++j) acc += w[j] * (sample(k + 1 - j) - y0);
    return acc;
  };

  const double t0 = x0.t;
  for (Index k = 0; k < n; ++k) {
    const MarketState& cur = traj.states.back();
    MarketState next;
    next.S.resize(mp.m);
    next.D.resize(mp.n);
    for (Index i = 0; i < mp.m; ++i) {
      const double f = producer_gap(mp, i, cur.S[i], cur.lambda) / mp.alpha[i];
      const auto& w = wS[static_cast<std::size_t>(i)];
      const double mem = memory(w, [&](Index s) { return traj.states[s].S[i]; }, k);
      next.S[i] = cur.S[i] + (dt_pow(dt, fs.ord_alpha[i]) * f - mem);
    }
    for (Index j = 0; j < mp.n; ++j) {
      const double f = consumer_gap(mp, j, cur.D[j], cur.lambda) / mp.beta[j];
      const auto& w = wD[static_cast<std::size_t>(j)];
      const double mem = memory(w, [&](Index s) { return traj.states[s].D[j]; }, k);
      next.D[j] = cur.D[j] + (dt_pow(dt, fs.ord_beta[j]) * f - mem);
    }
    {
      const double omega = has_signal ? fs.omega_coi(cur.t) : fs.omega_ref;
      const double f = -fs.H_d * cur.lambda + fs.K_E * (fs.omega_ref - omega);
      const double mem = memory(wL, [&](Index s) { return traj.states[s].lambda; }, k);
      next.lambda = cur.lambda + (dt_pow(dt, fs.ord_gamma) * f - mem);
    }
    next.E = cur.E + dt * net_imbalance(cur.S, cur.D);
    next.t = t0 + static_cast<double>(k + 1) * dt;
    if (!all_finite(next)) {
      std::ostringstream os;
      os << "state became non-finite at step " << (k + 1);
      throw SimulationAbort(os.str(), static_cast<std::size_t>(k) + 1);
    }
    traj.states.push_back(std::move(next));
  }
  return traj;
}

}  // namespace emx
