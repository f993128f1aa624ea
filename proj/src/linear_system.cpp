#include "emx/linear_system.hpp"

#include <string>

#include "emx/errors.hpp"

namespace emx {
namespace {

std::vector<std::string> make_labels(Index m, Index n, bool with_E) {
  std::vector<std::string> labels;
  for (Index i = 0; i < m; ++i) labels.push_back("S_" + std::to_string(i + 1));
  for (Index j = 0; j < n; ++j) labels.push_back("D_" + std::to_string(j + 1));
  if (with_E) labels.push_back("E");
  labels.push_back("lambda");
  return labels;
}

}  // namespace

LinearSystem assemble_linear_system(const MarketParams& mp, SystemVariant variant) {
  validate(mp);
  const Index m = mp.m;
  const Index n = mp.n;

  LinearSystem sys;
  sys.variant = variant;
  sys.m = m;
  sys.n = n;

  if (variant == SystemVariant::BalancedDae) {
    // States (S, D, lambda); the third block row is the balance constraint.
    const Index dim = m + n + 1;
    sys.E = Mat::Identity(dim, dim);
    sys.E(dim - 1, dim - 1) = 0.0;
    sys.A = Mat::Zero(dim, dim);
    sys.B = Vec::Zero(dim);
    for (Index i = 0; i < m; ++i) {
      sys.A(i, i) = -mp.alpha[i] * mp.b[i];
      sys.A(i, dim - 1) = mp.alpha[i];
      sys.B[i] = -mp.alpha[i] * mp.a[i];
    }
    for (Index j = 0; j < n; ++j) {
      sys.A(m + j, m + j) = -mp.beta[j] * mp.d[j];
      sys.A(m + j, dim - 1) = -mp.beta[j];
      sys.B[m + j] = mp.beta[j] * mp.c[j];
    }
    for (Index i = 0; i < m; ++i) sys.A(dim - 1, i) = 1.0;
    for (Index j = 0; j < n; ++j) sys.A(dim - 1, m + j) = -1.0;
    sys.labels = make_labels(m, n, false);
    return sys;
  }

  // Full variants over (S, D, E, lambda).
  const Index dim = m + n + 2;
  const Index iE = m + n;
  const Index il = m + n + 1;
  const bool sloped = variant == SystemVariant::FullSlopedJacobian;

  sys.E = Mat::Identity(dim, dim);
  sys.A = Mat::Zero(dim, dim);
  sys.B = Vec::Zero(dim);
  for (Index i = 0; i < m; ++i) {
    if (sloped) sys.A(i, i) = -mp.alpha[i] * mp.b[i];
    sys.A(i, il) = mp.alpha[i];
    sys.B[i] = -mp.alpha[i] * mp.a[i];
  }
  for (Index j = 0; j < n; ++j) {
    if (sloped) sys.A(m + j, m + j) = -mp.beta[j] * mp.d[j];
    sys.A(m + j, il) = -mp.beta[j];
    sys.B[m + j] = mp.beta[j] * mp.c[j];
  }
  for (Index i = 0; i < m; ++i) sys.A(iE, i) = 1.0;
  for (Index j = 0; j < n; ++j) sys.A(iE, m + j) = -1.0;
  sys.A(il, iE) = -mp.k_price;
  sys.A(il, il) = -mp.h_gain;
  sys.B[il] = mp.h_gain * mp.lambda0;
  sys.labels = make_labels(m, n, true);
  return sys;
}

}  // namespace emx
