#include "emx/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "emx/errors.hpp"

namespace emx {
namespace {

constexpr double kMarginTol = 1e-8;   // |Re| band counted as marginal
constexpr double kZeroTol = 1e-8;     // |lambda| band treated as a zero eigenvalue
constexpr double kTrimTol = 1e-9;     // relative cutoff for leading coefficients
constexpr double kDampingFloor = 0.05;

// Product of row norms of M: Hadamard's bound on |det M|, used as the scale
// against which a sampled determinant counts as zero.
double hadamard_bound(const Mat& M) {
  double prod = 1.0;
  for (Index r = 0; r < M.rows(); ++r) prod *= M.row(r).norm();
  return prod;
}

Vec trim_and_normalize(Vec coeffs) {
  const double cmax = coeffs.cwiseAbs().maxCoeff();
  Index degree = 0;
  for (Index k = coeffs.size() - 1; k >= 0; --k) {
    if (std::abs(coeffs[k]) > kTrimTol * cmax) {
      degree = k;
      break;
    }
  }
  coeffs.conservativeResize(degree + 1);
  if (coeffs[degree] < 0.0) coeffs = -coeffs;
  return coeffs;
}

}  // namespace

PencilInfo classify_pencil(const Mat& E, const Mat& A) {
  if (E.rows() != A.rows() || E.cols() != A.cols())
    throw ValidationError("E and A must have identical shapes");
  PencilInfo info;
  if (A.rows() != A.cols()) return info;  // non-square: Singular by definition

  const Index dim = A.rows();
  if (dim == 0) throw ValidationError("pencil must be non-empty");

  // Sample det(s E - A) at dim+1 Chebyshev points scaled to the pencil's
  // magnitude, then recover the polynomial by interpolation in the scaled
  // variable u = s / rho.
  const double rho = std::max(1.0, A.norm()) / std::max(1.0, E.norm());
  const Index np = dim + 1;
  Vec u(np);
  Vec dets(np);
  bool all_zero = true;
  for (Index i = 0; i < np; ++i) {
    u[i] = std::cos((2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                    (2.0 * static_cast<double>(np)));
    const Mat M = (rho * u[i]) * E - A;
    dets[i] = M.determinant();
    if (std::abs(dets[i]) > 1e-10 * hadamard_bound(M)) all_zero = false;
  }
  if (all_zero) return info;

  Mat V(np, np);
  for (Index i = 0; i < np; ++i) {
    double p = 1.0;
    for (Index k = 0; k < np; ++k) {
      V(i, k) = p;
      p *= u[i];
    }
  }
  Vec chat = V.partialPivLu().solve(dets);
  double scale = 1.0;
  for (Index k = 0; k < np; ++k) {
    chat[k] /= scale;
    scale *= rho;
  }

  info.kind = PencilClass::Regular;
  info.char_poly = trim_and_normalize(std::move(chat));
  return info;
}

std::optional<ModeMetrics> mode_metrics(std::complex<double> lambda) {
  const double mag = std::abs(lambda);
  if (mag == 0.0) return std::nullopt;
  ModeMetrics mm;
  mm.zeta = -lambda.real() / mag;
  mm.f_n = mag / (2.0 * std::numbers::pi);
  return mm;
}

namespace {

// Smallest right singular vector of M: a unit vector minimizing ||M v||.
CVec near_null_vector(const CMat& M) {
  Eigen::JacobiSVD<CMat> svd(M, Eigen::ComputeFullV);
  return svd.matrixV().col(M.cols() - 1);
}

bool mode_order(const EigenMode& a, const EigenMode& b) {
  if (a.kind != b.kind) return a.kind == ModeKind::Finite;
  if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
  return a.value.imag() < b.value.imag();
}

std::pair<Verdict, bool> assess(const std::vector<EigenMode>& modes) {
  if (modes.empty()) throw std::invalid_argument("stability verdict needs at least one mode");

  bool any_finite = false;
  double max_re = -std::numeric_limits<double>::infinity();
  for (const EigenMode& mode : modes) {
    if (mode.kind != ModeKind::Finite) continue;
    any_finite = true;
    max_re = std::max(max_re, mode.value.real());
  }
  // A purely algebraic system (no finite modes) has nothing left to decay.
  if (!any_finite) return {Verdict::AsymptoticallyStable, true};

  Verdict verdict = Verdict::Unstable;
  if (max_re < -kMarginTol)
    verdict = Verdict::AsymptoticallyStable;
  else if (max_re <= kMarginTol)
    verdict = Verdict::Marginal;

  bool damped = verdict != Verdict::Unstable;
  if (damped) {
    for (const EigenMode& mode : modes) {
      if (mode.kind != ModeKind::Finite) continue;
      if (std::abs(mode.value) <= kZeroTol) continue;  // metrics undefined at zero
      const auto mm = mode_metrics(mode.value);
      if (mm && mm->zeta <= kDampingFloor) {
        damped = false;
        break;
      }
    }
  }
  return {verdict, damped};
}

}  // namespace

SpectrumReport generalized_eigenvalues(const Mat& E, const Mat& A) {
  const PencilInfo info = classify_pencil(E, A);
  if (info.kind == PencilClass::Singular)
    throw std::invalid_argument("generalized eigenvalues are undefined for a singular pencil");

  const Index dim = A.rows();
  const Index degree = info.char_poly.size() - 1;

  SpectrumReport report;
  report.char_poly = info.char_poly;
  report.n_finite = degree;
  report.n_infinite = dim - degree;

  if (degree > 0) {
    // Roots of char_poly through the companion matrix of its monic form.
    Vec monic = info.char_poly / info.char_poly[degree];
    Mat comp = Mat::Zero(degree, degree);
    for (Index r = 1; r < degree; ++r) comp(r, r - 1) = 1.0;
    for (Index r = 0; r < degree; ++r) comp(r, degree - 1) = -monic[r];
    Eigen::EigenSolver<Mat> es(comp);
    const CMat Ec = E.cast<std::complex<double>>();
    const CMat Ac = A.cast<std::complex<double>>();
    for (Index r = 0; r < degree; ++r) {
      EigenMode mode;
      mode.kind = ModeKind::Finite;
      mode.value = es.eigenvalues()[r];
      if (std::abs(mode.value) > kZeroTol) mode.metrics = mode_metrics(mode.value);
      mode.right_vec = near_null_vector(Ac - mode.value * Ec);
      report.modes.push_back(std::move(mode));
    }
  }
  if (report.n_infinite > 0) {
    // Infinite modes take eigenvectors from the null directions of E.
    Eigen::JacobiSVD<Mat> svd(E, Eigen::ComputeFullV);
    for (Index q = 0; q < report.n_infinite; ++q) {
      EigenMode mode;
      mode.kind = ModeKind::Infinite;
      mode.right_vec = svd.matrixV().col(dim - 1 - q).cast<std::complex<double>>();
      report.modes.push_back(std::move(mode));
    }
  }

  std::sort(report.modes.begin(), report.modes.end(), mode_order);
  std::tie(report.verdict, report.well_damped) = assess(report.modes);
  return report;
}

std::pair<Verdict, bool> stability_verdict(const SpectrumReport& report) {
  return assess(report.modes);
}

SpectrumReport dual_spectrum(const SpectrumReport& report) {
  const Index dim = report.n_finite + report.n_infinite;
  SpectrumReport dual;
  for (const EigenMode& mode : report.modes) {
    EigenMode out;
    out.right_vec = mode.right_vec;  // eigenvectors are shared by both pencils
    if (mode.kind == ModeKind::Infinite) {
      out.kind = ModeKind::Finite;
      out.value = 0.0;
    } else if (std::abs(mode.value) <= kZeroTol) {
      out.kind = ModeKind::Infinite;
      out.value = 0.0;
    } else {
      out.kind = ModeKind::Finite;
      out.value = 1.0 / mode.value;
      out.metrics = mode_metrics(out.value);
    }
    dual.modes.push_back(std::move(out));
  }
  dual.n_finite =
      static_cast<Index>(std::count_if(dual.modes.begin(), dual.modes.end(),
                                       [](const EigenMode& m) { return m.kind == ModeKind::Finite; }));
  dual.n_infinite = dim - dual.n_finite;

  // Coefficient reversal: q(s) = s^dim p(1/s) up to sign.
  Vec padded = Vec::Zero(dim + 1);
  padded.head(report.char_poly.size()) = report.char_poly;
  dual.char_poly = trim_and_normalize(padded.reverse());

  std::sort(dual.modes.begin(), dual.modes.end(), mode_order);
  std::tie(dual.verdict, dual.well_damped) = assess(dual.modes);
  return dual;
}

CVec left_eigenvector(const Mat& E, const Mat& A, std::complex<double> lambda) {
  if (E.rows() != A.rows() || E.cols() != A.cols() || A.rows() != A.cols())
    throw ValidationError("E and A must be square with identical shapes");
  const CMat M = (A.cast<std::complex<double>>() - lambda * E.cast<std::complex<double>>());
  return near_null_vector(M.transpose());
}

nlohmann::json spectrum_to_json(const SpectrumReport& report) {
  nlohmann::json j;
  j["modes"] = nlohmann::json::array();
  for (const EigenMode& mode : report.modes) {
    nlohmann::json jm;
    if (mode.kind == ModeKind::Finite) {
      jm["kind"] = "finite";
      jm["re"] = mode.value.real();
      jm["im"] = mode.value.imag();
    } else {
      jm["kind"] = "infinite";
      jm["re"] = nullptr;
      jm["im"] = nullptr;
    }
    if (mode.metrics) {
      jm["zeta"] = mode.metrics->zeta;
      jm["fn"] = mode.metrics->f_n;
    } else {
      jm["zeta"] = nullptr;
      jm["fn"] = nullptr;
    }
    j["modes"].push_back(std::move(jm));
  }
  j["p"] = report.n_finite;
  j["q"] = report.n_infinite;
  j["verdict"] = to_string(report.verdict);
  j["well_damped"] = report.well_damped;
  return j;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::AsymptoticallyStable: return "asymptotically_stable";
    case Verdict::Marginal: return "marginal";
    case Verdict::Unstable: return "unstable";
  }
  return "unknown";
}

}  // namespace emx
