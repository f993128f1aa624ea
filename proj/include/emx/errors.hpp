#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emx {

/// Thrown when model parameters or specs violate their documented preconditions.
/// The message names the offending field and, where applicable, index and bound.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a simulation produces a non-finite state component.
class SimulationAbort : public std::runtime_error {
 public:
  SimulationAbort(const std::string& what, std::size_t step)
      : std::runtime_error(what), step_(step) {}

  /// Index of the step at which the first non-finite value appeared.
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

/// Thrown on malformed scenario files: JSON syntax errors or missing/invalid
/// sections required by the scenario's model family.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace emx
