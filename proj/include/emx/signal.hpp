#pragma once

#include <filesystem>
#include <vector>

namespace emx {

/// Piecewise-constant signal: value at t is the sample at the latest time
/// <= t, extended by the first value before the first sample and by the last
/// value after the last sample.
class PiecewiseConstantSignal {
 public:
  PiecewiseConstantSignal() = default;

  /// Constant signal.
  explicit PiecewiseConstantSignal(double value);

  /// Sample times must be strictly ascending and finite.
  PiecewiseConstantSignal(std::vector<double> times, std::vector<double> values);

  /// Reads a two-column CSV (t, value), optionally with a header line.
  static PiecewiseConstantSignal from_csv(const std::filesystem::path& path);

  double operator()(double t) const;

  bool is_constant() const { return times_.size() <= 1; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> times_;
  std::vector<double> values_;
};

}  // namespace emx
