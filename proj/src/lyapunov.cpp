#include "emx/lyapunov.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "emx/errors.hpp"

namespace emx {
namespace {

constexpr double kEigTol = 1e-10;

double asymmetry(const Mat& M) { return (M - M.transpose()).cwiseAbs().maxCoeff(); }

}  // namespace

LyapunovCheck lyapunov_check(const Mat& E, const Mat& A, const Mat& M) {
  const Index dim = A.rows();
  if (A.cols() != dim || E.rows() != dim || E.cols() != dim || M.rows() != dim ||
      M.cols() != dim)
    throw ValidationError("E, A and M must be square with matching dimensions");
  if (asymmetry(M) > kEigTol * std::max(1.0, M.cwiseAbs().maxCoeff()))
    throw ValidationError("M must be symmetric");

  LyapunovCheck out;
  const Mat etm = E.transpose() * M;
  const double etm_scale = std::max(1.0, etm.cwiseAbs().maxCoeff());
  const bool etm_symmetric = asymmetry(etm) <= kEigTol * etm_scale;
  Eigen::SelfAdjointEigenSolver<Mat> es_etm(0.5 * (etm + etm.transpose()));
  out.min_etm_eig = es_etm.eigenvalues().minCoeff();
  out.etm_spd = etm_symmetric && out.min_etm_eig > kEigTol * etm_scale;

  const Mat decay = A.transpose() * M + M * A;
  const double decay_scale = std::max(1.0, decay.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Mat> es_decay(0.5 * (decay + decay.transpose()));
  out.max_decay_eig = es_decay.eigenvalues().maxCoeff();
  out.decay_nd = out.max_decay_eig < -kEigTol * decay_scale;

  out.pass = out.etm_spd && out.decay_nd;
  return out;
}

Mat lyapunov_solve_standard(const Mat& A, const Mat& Q) {
  const Index dim = A.rows();
  if (A.cols() != dim || Q.rows() != dim || Q.cols() != dim)
    throw ValidationError("A and Q must be square with matching dimensions");
  if (asymmetry(Q) > kEigTol * std::max(1.0, Q.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat> qs(0.5 * (Q + Q.transpose()));
  if (qs.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("Q must be positive definite");

  Eigen::EigenSolver<Mat> as(A);
  for (Index i = 0; i < dim; ++i) {
    if (as.eigenvalues()[i].real() >= 0.0)
      throw std::invalid_argument(
          "A is not Hurwitz: no positive definite solution exists");
  }

  // vec(A'M + M A) = (I kron A' + A' kron I) vec(M)
  const Mat I = Mat::Identity(dim, dim);
  Mat K(dim * dim, dim * dim);
  const Mat At = A.transpose();
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j)
      K.block(i * dim, j * dim, dim, dim) = I(i, j) * At + At(i, j) * I;

  Vec q(dim * dim);
  for (Index col = 0; col < dim; ++col) q.segment(col * dim, dim) = -Q.col(col);
  const Vec msol = K.partialPivLu().solve(q);
  Mat M(dim, dim);
  for (Index col = 0; col < dim; ++col) M.col(col) = msol.segment(col * dim, dim);
  return 0.5 * (M + M.transpose());  // clean symmetric roundoff
}

}  // namespace emx
