#pragma once

#include "emx/params.hpp"

namespace emx::detail {

// Additive synchronous update shared by the discrete model and the explicit
// Euler path of the continuous simulator.  The expression shapes are fixed:
// every coefficient multiplies its gap directly, so collapsed per-lag weights
// (dt * alpha etc.) reproduce this update bit-for-bit.
inline MarketState synchronous_step(const MarketParams& mp, const MarketState& s, double dt) {
  MarketState out;
  out.t = s.t + dt;
  out.S.resize(mp.m);
  out.D.resize(mp.n);
  for (Index i = 0; i < mp.m; ++i)
    out.S[i] = s.S[i] + (dt * mp.alpha[i]) * producer_gap(mp, i, s.S[i], s.lambda);
  for (Index j = 0; j < mp.n; ++j)
    out.D[j] = s.D[j] + (dt * mp.beta[j]) * consumer_gap(mp, j, s.D[j], s.lambda);
  out.E = s.E + dt * net_imbalance(s.S, s.D);
  out.lambda = s.lambda + (-(dt * mp.k_price) * s.E +
                           (dt * mp.h_gain) * (mp.lambda0 - s.lambda));
  return out;
}

}  // namespace emx::detail
