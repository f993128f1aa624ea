#pragma once

#include "emx/params.hpp"

namespace emx {

/// Outcome of testing a candidate certificate V(x) = x' E' M x.
struct LyapunovCheck {
  bool etm_spd = false;       // E' M symmetric positive definite
  bool decay_nd = false;      // A' M + M A negative definite
  bool pass = false;          // both conditions hold
  double min_etm_eig = 0.0;   // smallest eigenvalue of sym(E' M)
  double max_decay_eig = 0.0; // largest eigenvalue of sym(A' M + M A)
};

/// Eigenvalue sign checks with tolerance 1e-10 (scaled by the matrix norm).
/// M itself must be symmetric within 1e-10; otherwise ValidationError.
LyapunovCheck lyapunov_check(const Mat& E, const Mat& A, const Mat& M);

/// Solves A' M + M A = -Q for the standard-form system (E = I) through the
/// vectorized Kronecker linear system.  Requires symmetric positive definite
/// Q and Hurwitz A; otherwise there is no positive definite solution and a
/// std::invalid_argument is thrown.
Mat lyapunov_solve_standard(const Mat& A, const Mat& Q);

}  // namespace emx
