#include "emx/signal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "emx/errors.hpp"

namespace emx {

PiecewiseConstantSignal::PiecewiseConstantSignal(double value)
    : times_{0.0}, values_{value} {
  if (!std::isfinite(value)) throw ValidationError("signal value must be finite");
}

PiecewiseConstantSignal::PiecewiseConstantSignal(std::vector<double> times,
                                                 std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
  if (times_.empty() || times_.size() != values_.size())
    throw ValidationError("signal needs matching, non-empty time and value lists");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
      throw ValidationError("signal samples must be finite");
    if (i > 0 && times_[i] <= times_[i - 1])
      throw ValidationError("signal times must be strictly ascending");
  }
}

PiecewiseConstantSignal PiecewiseConstantSignal::from_csv(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open signal file: " + path.string());

  std::vector<double> times, values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, v = 0.0;
    if (!(row >> t >> v)) {
      if (first) {  // tolerate a header line
        first = false;
        continue;
      }
      throw ValidationError("malformed signal row in " + path.string() + ": " + line);
    }
    first = false;
    times.push_back(t);
    values.push_back(v);
  }
  return PiecewiseConstantSignal(std::move(times), std::move(values));
}

double PiecewiseConstantSignal::operator()(double t) const {
  if (times_.empty()) throw ValidationError("signal has no samples");
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  if (it == times_.begin()) return values_.front();
  return values_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

}  // namespace emx
