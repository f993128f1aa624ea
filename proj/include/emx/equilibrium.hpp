#pragma once

#include <string>

#include "emx/linear_system.hpp"
#include "emx/params.hpp"

namespace emx {

enum class EquilibriumStatus {
  Unique,          // full-rank solve
  Underdetermined, // consistent but rank deficient; minimum-norm solution
  Inconsistent,    // no exact solution; least-squares solution reported
};

struct EquilibriumResult {
  EquilibriumStatus status = EquilibriumStatus::Unique;
  Vec S;
  Vec D;
  double E = 0.0;
  double lambda = 0.0;
  double residual_norm = 0.0;  // ||A x + B|| at the reported point
};

/// Closed-form equilibrium of the sloped model (all b > 0, d > 0):
///   lambda* = (sum a_i/b_i + sum c_j/d_j) / (sum 1/b_i + sum 1/d_j)
///   S_i* = (lambda* - a_i) / b_i,  D_j* = (c_j - lambda*) / d_j,  E* = 0.
/// The price equalizes marginal cost and benefit and the market balances.
/// Throws ValidationError when any slope vanishes.
EquilibriumResult equilibrium_sloped(const MarketParams& mp);

/// Rank-revealing solve of A x = -B.  Ranks are decided against the tolerance
/// 1e-10 * sigma_max.  Rank-deficient consistent systems yield the
/// minimum-norm solution (Underdetermined); inconsistent ones the
/// least-squares solution (Inconsistent).  Consistency means
/// ||A x + B|| <= 1e-9 * (1 + ||B||).
EquilibriumResult equilibrium_solve(const LinearSystem& sys);

/// ||A x + B||_2 for a candidate state vector x in the system's state order.
double residual(const LinearSystem& sys, const Vec& x);

std::string to_string(EquilibriumStatus status);

}  // namespace emx
