#pragma once

#include <array>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "emx/params.hpp"

namespace emx {

/// A producer's offer: constant marginal cost and an output range.
struct Offer {
  double cost = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

/// A consumer's bid: constant marginal benefit and a consumption range.
struct Bid {
  double benefit = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct DispatchProblem {
  std::vector<Offer> producers;
  std::vector<Bid> consumers;
  /// Present in minimum-cost mode: total load that must be served exactly.
  std::optional<double> total_demand;
};

struct DispatchResult {
  Vec S;
  Vec D;
  double objective = 0.0;  // total cost (min-cost mode) or welfare (clearing mode)
  /// Clearing-price interval [cost of the last dispatched producer, benefit
  /// of the last served consumer]; with zero trade, [highest bid, lowest offer].
  std::array<double, 2> price_range{0.0, 0.0};
};

/// Serves total_demand at minimal cost by filling offers in ascending cost
/// order (ties by input index) between their bounds.  D holds the single
/// aggregate load.  Throws std::invalid_argument when total_demand lies
/// outside [sum lo, sum hi].
DispatchResult min_cost_dispatch(const DispatchProblem& problem, double total_demand);

/// Welfare-maximizing cleared quantities: highest-benefit demand is matched
/// with lowest-cost supply while marginal benefit >= marginal cost, after any
/// trade the lower bounds force.  Throws std::invalid_argument when the
/// bounds admit no balanced dispatch.
DispatchResult clear_market(const DispatchProblem& problem);

/// sum benefit_j * D_j - sum cost_i * S_i.
double social_welfare(const DispatchProblem& problem, const Vec& S, const Vec& D);

nlohmann::json dispatch_to_json(const DispatchResult& result);

}  // namespace emx
