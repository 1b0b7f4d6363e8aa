#pragma once

// Greedy allocation maximizing liquid welfare, and a checker for the four
// structural properties that single it out among all full allocations.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "budgetext/core_model.hpp"

namespace budgetext {

/// Share at which bidder i's value v_i x_i meets its budget alpha_i (1 - x_i).
inline double saturation_share(double value, double alpha) { return alpha / (value + alpha); }

/// Bidder indices by descending valuation; ties keep ascending index.
inline std::vector<std::size_t> order_by_value(AuctionInstance const &instance)
{
  std::vector<std::size_t> order(instance.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.value(a) > instance.value(b);
  });
  return order;
}

/// Bidder with the smallest alpha; the lowest index wins ties.
inline std::size_t least_alpha_bidder(AuctionInstance const &instance)
{
  auto const alphas = instance.alphas();
  return static_cast<std::size_t>(std::min_element(alphas.begin(), alphas.end()) - alphas.begin());
}

enum class OptimalBranch
{
  Saturating,  // saturation shares sum to at least one: some bidder is cut off
  Residual,    // every bidder saturates and the leftover goes to the least-alpha bidder
};

inline char const *to_string(OptimalBranch branch)
{
  return branch == OptimalBranch::Saturating ? "Case 1" : "Case 2";
}

struct OptimalTrace
{
  std::vector<std::size_t> sorted_order;
  OptimalBranch            branch = OptimalBranch::Saturating;
  /// Saturating branch: number of leading sorted bidders whose saturation
  /// shares fit into the item.
  std::optional<std::size_t> saturated_prefix;
  /// Residual branch: original index of the bidder receiving the leftover.
  std::optional<std::size_t> residual_bidder;
};

struct OptimalResult
{
  Allocation   allocation;
  OptimalTrace trace;
};

/// Welfare-optimal allocation, reported in the instance's bidder order.
inline OptimalResult optimal_allocation(AuctionInstance const &instance)
{
  std::size_t const n = instance.size();
  OptimalTrace trace;
  trace.sorted_order = order_by_value(instance);

  double saturation_total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    saturation_total += saturation_share(instance.value(i), instance.alpha(i));
  }

  std::vector<double> x(n, 0.0);
  double remaining = 1.0;
  for (std::size_t const i : trace.sorted_order)
  {
    double const want = saturation_share(instance.value(i), instance.alpha(i));
    if (remaining >= want)
    {
      x[i] = want;
      remaining -= want;
    }
    else if (remaining >= 0.0)
    {
      x[i] = remaining;
      remaining = 0.0;
    }
  }

  if (saturation_total >= 1.0)
  {
    trace.branch = OptimalBranch::Saturating;
    double prefix = 0.0;
    std::size_t r = 0;
    for (std::size_t const i : trace.sorted_order)
    {
      prefix += saturation_share(instance.value(i), instance.alpha(i));
      if (prefix > 1.0) break;
      ++r;
    }
    trace.saturated_prefix = r;
  }
  else
  {
    trace.branch = OptimalBranch::Residual;
    trace.residual_bidder = least_alpha_bidder(instance);
  }

  if (remaining > 0.0)
  {
    x[least_alpha_bidder(instance)] += remaining;
  }

  // Absorb accumulated rounding so the item is exactly exhausted.
  double const total = std::accumulate(x.begin(), x.end(), 0.0);
  std::size_t const last = *std::max_element(
    trace.sorted_order.begin(), trace.sorted_order.end(),
    [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  x[last] = std::max(0.0, x[last] + (1.0 - total));

  return {Allocation(std::move(x)), std::move(trace)};
}

struct OptProperties
{
  bool p1 = true;  // the whole item is allocated
  bool p2 = true;  // nobody but the least-alpha bidder exceeds its saturation share
  bool p3 = true;  // a later bidder gets something only if every earlier one is saturated
  bool p4 = true;  // the least-alpha bidder is over-served only once everyone else is saturated
  std::size_t least_alpha = 0;
  std::optional<std::string> first_violation;

  bool all() const noexcept { return p1 && p2 && p3 && p4; }
};

inline OptProperties check_opt_properties(AuctionInstance const &instance,
                                          Allocation const &allocation, double tol = kTolerance)
{
  detail::require_matching(instance, allocation);
  std::size_t const n = instance.size();
  auto const order = order_by_value(instance);
  auto const share = [&](std::size_t i) { return saturation_share(instance.value(i), instance.alpha(i)); };

  OptProperties props;
  props.least_alpha = least_alpha_bidder(instance);
  std::size_t const ell = props.least_alpha;
  auto const note = [&](std::string what) {
    if (!props.first_violation) props.first_violation = std::move(what);
  };

  if (std::abs(allocation.total() - 1.0) > tol)
  {
    props.p1 = false;
    note("P1: allocation sums to " + std::to_string(allocation.total()));
  }

  for (std::size_t i = 0; i < n; ++i)
  {
    if (i != ell && allocation[i] > share(i) + tol)
    {
      props.p2 = false;
      note("P2: bidder " + std::to_string(i) + " exceeds its saturation share");
      break;
    }
  }

  for (std::size_t a = 0; a < n && props.p3; ++a)
  {
    std::size_t const i = order[a];
    if (allocation[i] >= share(i) - tol) continue;
    for (std::size_t b = a + 1; b < n; ++b)
    {
      std::size_t const j = order[b];
      if (allocation[j] > tol)
      {
        props.p3 = false;
        note("P3: bidder " + std::to_string(j) + " served before bidder " + std::to_string(i) +
             " is saturated");
        break;
      }
    }
  }

  if (allocation[ell] > share(ell) + tol)
  {
    for (std::size_t i = 0; i < n; ++i)
    {
      if (i != ell && allocation[i] < share(i) - tol)
      {
        props.p4 = false;
        note("P4: bidder " + std::to_string(ell) + " over-served while bidder " +
             std::to_string(i) + " is unsaturated");
        break;
      }
    }
  }

  return props;
}

}  // namespace budgetext
