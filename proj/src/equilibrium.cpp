#include "emx/equilibrium.hpp"

#include <Eigen/SVD>

#include "emx/errors.hpp"

namespace emx {

EquilibriumResult equilibrium_sloped(const MarketParams& mp) {
  validate(mp);
  for (Index i = 0; i < mp.m; ++i)
    if (mp.b[i] <= 0.0)
      throw ValidationError(
          "equilibrium_sloped requires b > 0; use equilibrium_solve for flat costs");
  for (Index j = 0; j < mp.n; ++j)
    if (mp.d[j] <= 0.0)
      throw ValidationError(
          "equilibrium_sloped requires d > 0; use equilibrium_solve for flat costs");

  double num = 0.0;
  double den = 0.0;
  for (Index i = 0; i < mp.m; ++i) {
    num += mp.a[i] / mp.b[i];
    den += 1.0 / mp.b[i];
  }
  for (Index j = 0; j < mp.n; ++j) {
    num += mp.c[j] / mp.d[j];
    den += 1.0 / mp.d[j];
  }
  const double lambda = num / den;

  EquilibriumResult eq;
  eq.status = EquilibriumStatus::Unique;
  eq.lambda = lambda;
  eq.E = 0.0;
  eq.S = Vec(mp.m);
  eq.D = Vec(mp.n);
  for (Index i = 0; i < mp.m; ++i) eq.S[i] = (lambda - mp.a[i]) / mp.b[i];
  for (Index j = 0; j < mp.n; ++j) eq.D[j] = (mp.c[j] - lambda) / mp.d[j];
  eq.residual_norm = 0.0;
  return eq;
}

double residual(const LinearSystem& sys, const Vec& x) {
  if (x.size() != sys.dim()) throw ValidationError("x must match the system dimension");
  return (sys.A * x + sys.B).norm();
}

EquilibriumResult equilibrium_solve(const LinearSystem& sys) {
  const Index dim = sys.dim();
  Eigen::JacobiSVD<Mat> svd(sys.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double sigma_max = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  svd.setThreshold(1e-10);
  const Index rank = sigma_max > 0.0 ? svd.rank() : 0;

  // Pseudoinverse solve: least-squares solution, minimum-norm within the
  // least-squares set.
  const Vec x = svd.solve(-sys.B);
  const double res = (sys.A * x + sys.B).norm();
  const bool consistent = res <= 1e-9 * (1.0 + sys.B.norm());

  EquilibriumResult eq;
  if (rank == dim && consistent)
    eq.status = EquilibriumStatus::Unique;
  else if (consistent)
    eq.status = EquilibriumStatus::Underdetermined;
  else
    eq.status = EquilibriumStatus::Inconsistent;

  eq.S = x.head(sys.m);
  eq.D = x.segment(sys.m, sys.n);
  if (sys.variant == SystemVariant::BalancedDae) {
    eq.E = 0.0;
    eq.lambda = x[dim - 1];
  } else {
    eq.E = x[dim - 2];
    eq.lambda = x[dim - 1];
  }
  eq.residual_norm = res;
  return eq;
}

std::string to_string(EquilibriumStatus status) {
  switch (status) {
    case EquilibriumStatus::Unique: return "unique";
    case EquilibriumStatus::Underdetermined: return "underdetermined";
    case EquilibriumStatus::Inconsistent: return "inconsistent";
  }
  return "unknown";
}

}  // namespace emx
