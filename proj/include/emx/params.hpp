#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace emx {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Index = Eigen::Index;

/// Parameters of the market model with m producers and n consumers.
///
/// Producer i sells at marginal cost a[i] + b[i] * S_i, consumer j buys at
/// marginal benefit c[j] - d[j] * D_j.  Setting b = d = 0 gives the
/// constant-cost variant where a and c act as flat cost/benefit levels.
struct MarketParams {
  Index m = 0;      // number of producers
  Index n = 0;      // number of consumers
  Vec a;            // cost intercepts, size m
  Vec b;            // cost slopes, size m, b >= 0
  Vec c;            // benefit intercepts, size n
  Vec d;            // benefit slopes, size n, d >= 0
  Vec alpha;        // producer response rates, size m, > 0
  Vec beta;         // consumer response rates, size n, > 0
  double k_price = 0.0;   // imbalance feedback gain in the price equation, >= 0
  double h_gain = 0.0;    // price relaxation gain, >= 0
  double lambda0 = 0.0;   // reference price
};

/// One sample of the market: supplies S (size m), demands D (size n),
/// accumulated imbalance E and price lambda, at time t.
struct MarketState {
  double t = 0.0;
  Vec S;
  Vec D;
  double E = 0.0;
  double lambda = 0.0;
};

/// Per-lag weights for the memory and delay models.  Lag l refers to the
/// sample taken l * lag_step time units in the past (l = 0 is the present).
///
/// For the delay model the weights are rates, so the uniform choice
/// w_alpha(l,i) = alpha[i] / (p+1) preserves the undelayed total response.
/// For the discrete memory model the weights absorb the time step.
struct MemorySpec {
  Index p = 0;         // maximum lag
  double lag_step = 0; // time between lags, > 0
  Mat w_alpha;         // (p+1) x m producer weights, row l = lag l
  Mat w_beta;          // (p+1) x n consumer weights
  Vec w_k;             // p+1 imbalance-feedback weights in the price update
  Vec w_h;             // p+1 price-relaxation weights

  /// Weights that replicate the unweighted multi-lag update: every lag row
  /// carries the full alpha / beta / k_price / h_gain coefficients.
  static MemorySpec uniform(const MarketParams& mp, Index p, double lag_step);

  /// Same total coefficients split evenly across the p+1 lags.
  static MemorySpec split(const MarketParams& mp, Index p, double lag_step);
};

/// Throws ValidationError on dimension mismatches, sign violations or
/// non-finite entries.  Messages name the offending field and index.
void validate(const MarketParams& mp);

/// Validates mem against mp (shapes, lag_step > 0, finite weights).
void validate(const MarketParams& mp, const MemorySpec& mem);

/// Validates a state against mp: S sized m, D sized n, all entries finite.
void validate(const MarketParams& mp, const MarketState& s);

/// Marginal cost a + b .* S of every producer at supply S.
Vec marginal_cost(const MarketParams& mp, const Vec& S);

/// Marginal benefit c - d .* D of every consumer at demand D.
Vec marginal_benefit(const MarketParams& mp, const Vec& D);

/// True when b and d vanish, i.e. costs and benefits are flat.
bool is_constant_cost(const MarketParams& mp);

/// 64-bit fingerprint of the parameter set, used to tag trajectories with the
/// parameters that produced them.
std::uint64_t fingerprint(const MarketParams& mp);

// Shared elementary terms of the model equations.  Every simulator builds its
// update from these so that reductions between model variants agree bitwise.

/// lambda - (a[i] + b[i] * s): how far the price sits above producer i's
/// marginal cost at supply s.
inline double producer_gap(const MarketParams& mp, Index i, double s, double lambda) {
  return lambda - (mp.a[i] + mp.b[i] * s);
}

/// (c[j] - d[j] * dj) - lambda: how far consumer j's marginal benefit at
/// demand dj sits above the price.
inline double consumer_gap(const MarketParams& mp, Index j, double dj, double lambda) {
  return (mp.c[j] - mp.d[j] * dj) - lambda;
}

/// 1'S - 1'D with a fixed left-to-right summation order.
inline double net_imbalance(const Vec& S, const Vec& D) {
  double s = 0.0;
  for (Index i = 0; i < S.size(); ++i) s += S[i];
  double d = 0.0;
  for (Index j = 0; j < D.size(); ++j) d += D[j];
  return s - d;
}

/// True when every component of the state is finite.
bool all_finite(const MarketState& s);

}  // namespace emx
