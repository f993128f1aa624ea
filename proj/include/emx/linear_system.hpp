#pragma once

#include <string>
#include <vector>

#include "emx/params.hpp"

namespace emx {

/// Which affine form E x' = A x + B to assemble from a parameter set.
enum class SystemVariant {
  /// States (S, D, E, lambda), E_mat = I, flat costs: slopes b, d are ignored
  /// and a, c act as the constant cost/benefit levels.
  FullConstant,
  /// States (S, D, E, lambda), E_mat = I, with the -alpha[i]*b[i] and
  /// -beta[j]*d[j] diagonal blocks of the sloped model.
  FullSlopedJacobian,
  /// States (S, D, lambda) with the algebraic balance row 1'S - 1'D = 0;
  /// E_mat = diag(I, I, 0) and the price is determined by the constraint.
  BalancedDae,
};

/// Affine system E x' = A x + B in the fixed state order
/// S_1..S_m, D_1..D_n, [E,] lambda.
struct LinearSystem {
  SystemVariant variant = SystemVariant::FullConstant;
  Index m = 0;
  Index n = 0;
  Mat E;
  Mat A;
  Vec B;
  std::vector<std::string> labels;  // one per state component

  Index dim() const { return A.rows(); }
};

/// Assembles the requested variant.  Throws ValidationError on bad params.
LinearSystem assemble_linear_system(const MarketParams& mp, SystemVariant variant);

}  // namespace emx
