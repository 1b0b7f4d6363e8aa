#pragma once

// Brute-force validators: a simplex grid search for the liquid-welfare
// optimum and a misreport search against the mechanism.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "budgetext/core_model.hpp"
#include "budgetext/mechanism.hpp"

namespace budgetext {

struct OracleResult
{
  Allocation  best_allocation;
  double      best_lw = 0.0;
  std::size_t resolution = 0;
  bool        refined = false;
};

inline constexpr std::size_t kOracleMaxBidders = 5;
inline constexpr std::size_t kOracleMinResolution = 2;
inline constexpr double kRefineStepFloor = 1e-6;

namespace detail {

// Strictly improving pairwise exchanges: move up to `step` of the item from
// one bidder to another, halving the step once no exchange helps.
inline bool refine_by_exchange(std::span<const double> values, std::span<const double> alphas,
                               std::vector<double> &x, double &best, double step)
{
  bool any = false;
  std::vector<double> trial(x.size());
  for (; step >= kRefineStepFloor; step *= 0.5)
  {
    bool improved = true;
    while (improved)
    {
      improved = false;
      for (std::size_t from = 0; from < x.size(); ++from)
      {
        for (std::size_t to = 0; to < x.size(); ++to)
        {
          if (from == to) continue;
          double const amount = std::min(step, x[from]);
          if (!(amount > 0.0)) continue;
          trial = x;
          trial[from] -= amount;
          trial[to] += amount;
          double const lw = liquid_welfare(values, alphas, trial);
          if (lw > best)
          {
            x.swap(trial);
            best = lw;
            improved = true;
            any = true;
          }
        }
      }
    }
  }
  return any;
}

}  // namespace detail

/// Best liquid welfare over full allocations on the grid x_i = k_i / m,
/// polished by pairwise exchange refinement.
///
/// Grid ties keep the lexicographically first allocation in enumeration
/// order, so the result is deterministic.
inline OracleResult grid_search_lw(AuctionInstance const &instance, std::size_t resolution)
{
  std::size_t const n = instance.size();
  if (n > kOracleMaxBidders)
  {
    throw InvalidInput("grid_search_lw: at most " + std::to_string(kOracleMaxBidders) +
                       " bidders are supported");
  }
  if (resolution < kOracleMinResolution)
  {
    throw InvalidInput("grid_search_lw: resolution must be at least " +
                       std::to_string(kOracleMinResolution));
  }

  auto const values = instance.valuations();
  auto const alphas = instance.alphas();
  double const m = static_cast<double>(resolution);

  // counts[0..n-2] enumerate lexicographically, the last bidder takes the rest.
  std::vector<std::size_t> counts(n, 0);
  counts[n - 1] = resolution;
  std::vector<double> x(n), best_x(n);
  double best = -std::numeric_limits<double>::infinity();

  for (;;)
  {
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(counts[i]) / m;
    double const lw = detail::liquid_welfare(values, alphas, x);
    if (lw > best)
    {
      best = lw;
      best_x = x;
    }

    // Advance: bump the rightmost free coordinate that still has room.
    std::size_t used = resolution - counts[n - 1];
    std::ptrdiff_t pos = static_cast<std::ptrdiff_t>(n) - 2;
    while (pos >= 0 && used == resolution)
    {
      used -= counts[pos];
      counts[pos] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++counts[pos];
    ++used;
    counts[n - 1] = resolution - used;
  }

  OracleResult result;
  result.resolution = resolution;
  result.refined = detail::refine_by_exchange(values, alphas, best_x, best, 1.0 / m);
  result.best_lw = best;
  result.best_allocation = Allocation(std::move(best_x));
  return result;
}

/// Bidder j's utility at `true_value` when the mechanism runs on `reported`.
inline Utility bidder_utility(AuctionInstance const &reported, std::size_t j, double true_value,
                              MechanismOptions const &options = {})
{
  detail::require_index(reported, j);
  double const share = allocation_curve(reported, j, reported.value(j), options.dummy_alpha);
  double const payment = myerson_payment(reported, j, options);
  // Every real bidder is served from the same unit, so the others hold 1 - x_j.
  double const budget = reported.alpha(j) * std::max(0.0, 1.0 - share);
  if (payment > budget + kTolerance) return Utility::budget_violated();
  return Utility::finite(true_value * share - payment);
}

struct DeviationResult
{
  double best_misreport = 0.0;
  /// Utility gain of the best misreport over truthful reporting; may be <= 0.
  double max_gain = -std::numeric_limits<double>::infinity();
  /// Set when a report, truthful or not, charged the bidder above its budget.
  bool budget_violation_seen = false;
};

/// Searches `misreports` for a report that beats truthful bidding.
inline DeviationResult best_deviation(AuctionInstance const &instance, std::size_t bidder,
                                      double true_value, std::span<const double> misreports,
                                      MechanismOptions const &options = {})
{
  detail::require_index(instance, bidder);
  if (misreports.empty()) throw InvalidInput("best_deviation: misreport grid is empty");
  if (!(true_value >= 0.0)) throw InvalidInput("best_deviation: true value must be non-negative");

  DeviationResult result;
  auto const truthful = bidder_utility(instance.with_value(bidder, true_value), bidder, true_value, options);
  if (truthful.is_budget_violated())
  {
    result.budget_violation_seen = true;
  }
  for (double const z : misreports)
  {
    if (!(z >= 0.0)) throw InvalidInput("best_deviation: misreports must be non-negative");
    auto const u = bidder_utility(instance.with_value(bidder, z), bidder, true_value, options);
    if (u.is_budget_violated())
    {
      result.budget_violation_seen = true;
      continue;
    }
    double const gain = truthful.is_budget_violated() ? std::numeric_limits<double>::infinity()
                                                      : u.amount() - truthful.amount();
    if (gain > result.max_gain)
    {
      result.max_gain = gain;
      result.best_misreport = z;
    }
  }
  return result;
}

}  // namespace budgetext
