#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emx/params.hpp"

namespace emx {

enum class PencilClass { Regular, Singular };

/// Classification of the pencil s E - A together with its characteristic
/// polynomial when regular.
struct PencilInfo {
  PencilClass kind = PencilClass::Singular;
  /// Coefficients of det(s E - A) in ascending powers, normalized so the
  /// leading coefficient is positive.  Near-zero leading coefficients
  /// (|coef| < 1e-9 * max|coef|) are trimmed, so the degree equals the
  /// number of finite eigenvalues.  Empty when the pencil is singular.
  Vec char_poly;
};

/// det(s E - A) is interpolated from evaluations at dim+1 Chebyshev points;
/// the pencil is Singular when it is non-square or the determinant vanishes
/// at every sample point (relative to a Hadamard bound).
PencilInfo classify_pencil(const Mat& E, const Mat& A);

enum class ModeKind { Finite, Infinite };

/// Damping ratio and natural frequency of an eigenvalue a + ib:
///   zeta = -a / sqrt(a^2 + b^2),  f_n = sqrt(a^2 + b^2) / (2 pi).
struct ModeMetrics {
  double zeta = 0.0;
  double f_n = 0.0;
};

/// Metrics are undefined at lambda = 0 (the formulas divide by |lambda|),
/// reported as an empty optional rather than NaN.
std::optional<ModeMetrics> mode_metrics(std::complex<double> lambda);

struct EigenMode {
  ModeKind kind = ModeKind::Finite;
  std::complex<double> value;         // meaningful for Finite modes only
  std::optional<ModeMetrics> metrics; // absent for Infinite and zero modes
  CVec right_vec;                     // size 0 when not computed
};

enum class Verdict { AsymptoticallyStable, Marginal, Unstable };

struct SpectrumReport {
  std::vector<EigenMode> modes;
  Index n_finite = 0;    // count of finite eigenvalues (degree of char_poly)
  Index n_infinite = 0;  // dim - n_finite
  Vec char_poly;
  Verdict verdict = Verdict::Marginal;
  bool well_damped = false;
};

/// Full eigenstructure of the regular pencil s E - A.  Finite eigenvalues are
/// the roots of char_poly, found through a companion-matrix eigensolve; right
/// eigenvectors come from the smallest singular vector of A - lambda E (for
/// infinite modes, of E).  Throws std::invalid_argument on singular pencils.
SpectrumReport generalized_eigenvalues(const Mat& E, const Mat& A);

/// Verdict with tolerance 1e-8 on max Re(lambda) over finite modes:
/// below -tol AsymptoticallyStable, within [-tol, tol] Marginal, else
/// Unstable.  well_damped requires zeta > 0.05 for every finite oscillatory
/// mode; zero eigenvalues are excluded and an Unstable verdict forces
/// well_damped = false.  Throws std::invalid_argument on an empty mode list.
std::pair<Verdict, bool> stability_verdict(const SpectrumReport& report);

/// Spectrum of the role-swapped pencil s A - E.  Zero and infinite
/// eigenvalues trade places, finite nonzero ones map to their reciprocals,
/// and eigenvectors carry over unchanged.  Applying it twice recovers the
/// original spectrum.
SpectrumReport dual_spectrum(const SpectrumReport& report);

/// Left eigenvector w with w^T (A - lambda E) = 0, computed on demand.
CVec left_eigenvector(const Mat& E, const Mat& A, std::complex<double> lambda);

nlohmann::json spectrum_to_json(const SpectrumReport& report);

std::string to_string(Verdict verdict);

}  // namespace emx
