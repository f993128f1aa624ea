#include "emx/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emx/errors.hpp"

namespace emx {

namespace {

void check_range(const char* side, std::size_t idx, double price, double lo, double hi) {
  if (!std::isfinite(price) || !std::isfinite(lo) || !std::isfinite(hi) || lo > hi) {
    std::ostringstream os;
    os << side << "[" << idx << "] needs finite price and ordered bounds, got price "
       << price << ", bounds [" << lo << ", " << hi << "]";
    throw ValidationError(os.str());
  }
  if (lo < 0.0) {
    std::ostringstream os;
    os << side << "[" << idx << "] lower bound must be >= 0";
    throw ValidationError(os.str());
  }
}

void validate(const DispatchProblem& p) {
  for (std::size_t i = 0; i < p.producers.size(); ++i)
    check_range("producers", i, p.producers[i].cost, p.producers[i].lo, p.producers[i].hi);
  for (std::size_t j = 0; j < p.consumers.size(); ++j)
    check_range("consumers", j, p.consumers[j].benefit, p.consumers[j].lo,
                p.consumers[j].hi);
}

// Ascending cost for offers, descending benefit for bids; ties keep input order.
std::vector<std::size_t> merit_order(const std::vector<Offer>& offers) {
  std::vector<std::size_t> idx(offers.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (offers[a].cost != offers[b].cost) return offers[a].cost < offers[b].cost;
    return a < b;
  });
  return idx;
}

std::vector<std::size_t> benefit_order(const std::vector<Bid>& bids) {
  std::vector<std::size_t> idx(bids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (bids[a].benefit != bids[b].benefit) return bids[a].benefit > bids[b].benefit;
    return a < b;
  });
  return idx;
}

}  // namespace

DispatchResult min_cost_dispatch(const DispatchProblem& problem, double total_demand) {
  validate(problem);
  if (!std::isfinite(total_demand) || total_demand < 0.0)
    throw ValidationError("total_demand must be finite and >= 0");

  const auto& offers = problem.producers;
  double lo_sum = 0.0, hi_sum = 0.0;
  for (const Offer& o : offers) {
    lo_sum += o.lo;
    hi_sum += o.hi;
  }
  const double slack = 1e-9 * std::max(1.0, std::abs(total_demand));
  if (total_demand < lo_sum - slack || total_demand > hi_sum + slack) {
    std::ostringstream os;
    os << "total_demand " << total_demand << " outside the feasible range [" << lo_sum
       << ", " << hi_sum << "]";
    throw std::invalid_argument(os.str());
  }

  DispatchResult res;
  res.S.resize(static_cast<Index>(offers.size()));
  for (std::size_t i = 0; i < offers.size(); ++i)
    res.S[static_cast<Index>(i)] = offers[i].lo;

  const std::vector<std::size_t> order = merit_order(offers);
  double remaining = total_demand - lo_sum;
  double marginal = offers.empty() ? 0.0 : offers[order.front()].cost;
  for (std::size_t i : order) {
    if (remaining <= 0.0) break;
    const double take = std::min(remaining, offers[i].hi - offers[i].lo);
    if (take > 0.0) {
      res.S[static_cast<Index>(i)] += take;
      remaining -= take;
      marginal = offers[i].cost;
    }
  }

  res.D.resize(1);
  res.D[0] = total_demand;
  res.objective = 0.0;
  for (std::size_t i = 0; i < offers.size(); ++i)
    res.objective += offers[i].cost * res.S[static_cast<Index>(i)];
  res.price_range = {marginal, marginal};
  return res;
}

DispatchResult clear_market(const DispatchProblem& problem) {
  validate(problem);
  if (problem.producers.empty() || problem.consumers.empty())
    throw ValidationError("clearing needs at least one producer and one consumer");

  const auto& offers = problem.producers;
  const auto& bids = problem.consumers;
  double s_lo = 0.0, s_hi = 0.0, d_lo = 0.0, d_hi = 0.0;
  for (const Offer& o : offers) {
    s_lo += o.lo;
    s_hi += o.hi;
  }
  for (const Bid& b : bids) {
    d_lo += b.lo;
    d_hi += b.hi;
  }
  if (s_lo > d_hi + 1e-9 || d_lo > s_hi + 1e-9)
    throw std::invalid_argument("bounds admit no balanced dispatch");

  DispatchResult res;
  res.S.resize(static_cast<Index>(offers.size()));
  res.D.resize(static_cast<Index>(bids.size()));
  for (std::size_t i = 0; i < offers.size(); ++i)
    res.S[static_cast<Index>(i)] = offers[i].lo;
  for (std::size_t j = 0; j < bids.size(); ++j)
    res.D[static_cast<Index>(j)] = bids[j].lo;

  const std::vector<std::size_t> po = merit_order(offers);
  const std::vector<std::size_t> co = benefit_order(bids);

  // The larger lower-bound total forces trade; fill the short side with its
  // best units first so the forced dispatch is itself optimal.
  if (s_lo < d_lo) {
    double need = d_lo - s_lo;
    for (std::size_t i : po) {
      if (need <= 0.0) break;
      const double take = std::min(need, offers[i].hi - res.S[static_cast<Index>(i)]);
      res.S[static_cast<Index>(i)] += take;
      need -= take;
    }
  } else if (d_lo < s_lo) {
    double need = s_lo - d_lo;
    for (std::size_t j : co) {
      if (need <= 0.0) break;
      const double take = std::min(need, bids[j].hi - res.D[static_cast<Index>(j)]);
      res.D[static_cast<Index>(j)] += take;
      need -= take;
    }
  }

  // Voluntary trade: cheapest remaining supply against highest remaining
  // benefit while the pair is not welfare-negative.
  std::size_t pi = 0, ci = 0;
  while (pi < po.size() && ci < co.size()) {
    const Offer& o = offers[po[pi]];
    const Bid& b = bids[co[ci]];
    const double cap_s = o.hi - res.S[static_cast<Index>(po[pi])];
    const double cap_d = b.hi - res.D[static_cast<Index>(co[ci])];
    if (cap_s <= 0.0) {
      ++pi;
      continue;
    }
    if (cap_d <= 0.0) {
      ++ci;
      continue;
    }
    if (b.benefit < o.cost) break;
    const double q = std::min(cap_s, cap_d);
    res.S[static_cast<Index>(po[pi])] += q;
    res.D[static_cast<Index>(co[ci])] += q;
  }

  res.objective = social_welfare(problem, res.S, res.D);

  bool traded = false;
  double lo_price = -std::numeric_limits<double>::infinity();
  double hi_price = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < offers.size(); ++i)
    if (res.S[static_cast<Index>(i)] > 0.0) {
      traded = true;
      lo_price = std::max(lo_price, offers[i].cost);
    }
  for (std::size_t j = 0; j < bids.size(); ++j)
    if (res.D[static_cast<Index>(j)] > 0.0) hi_price = std::min(hi_price, bids[j].benefit);
  if (traded) {
    res.price_range = {lo_price, hi_price};
  } else {
    double best_bid = bids.front().benefit, best_offer = offers.front().cost;
    for (const Bid& b : bids) best_bid = std::max(best_bid, b.benefit);
    for (const Offer& o : offers) best_offer = std::min(best_offer, o.cost);
    res.price_range = {best_bid, best_offer};
  }
  return res;
}

double social_welfare(const DispatchProblem& problem, const Vec& S, const Vec& D) {
  if (S.size() != static_cast<Index>(problem.producers.size()) ||
      D.size() != static_cast<Index>(problem.consumers.size()))
    throw ValidationError("dispatch dimensions do not match the problem");
  double w = 0.0;
  for (Index j = 0; j < D.size(); ++j)
    w += problem.consumers[static_cast<std::size_t>(j)].benefit * D[j];
  for (Index i = 0; i < S.size(); ++i)
    w -= problem.producers[static_cast<std::size_t>(i)].cost * S[i];
  return w;
}

nlohmann::json dispatch_to_json(const DispatchResult& result) {
  nlohmann::json j;
  j["S"] = std::vector<double>(result.S.begin(), result.S.end());
  j["D"] = std::vector<double>(result.D.begin(), result.D.end());
  j["objective"] = result.objective;
  j["price_range"] = {result.price_range[0], result.price_range[1]};
  return j;
}

}  // namespace emx
