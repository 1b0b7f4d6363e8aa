#pragma once

// Uniform-price auction with a purchase limit of one half per bidder.
//
// A zero-value dummy bidder is appended behind the real bidders. Bidders are
// ranked by reported value; the division point k is the longest prefix whose
// capped demands at the price of its last member fit into one unit, and the
// uniform price q clears those k capped demands. Payments follow Myerson's
// payment identity for the resulting monotone allocation rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "budgetext/core_model.hpp"
#include "budgetext/numeric.hpp"

namespace budgetext {

inline constexpr double kPurchaseLimit = 0.5;

enum class PriceBranch
{
  PriceAboveNext,   // q > v_{k+1}: only the first k bidders are served
  PriceAtMostNext,  // q <= v_{k+1}: bidder k+1 takes what the first k leave
};

inline char const *to_string(PriceBranch branch)
{
  return branch == PriceBranch::PriceAboveNext ? "PriceAboveNext" : "PriceAtMostNext";
}

struct MechanismTrace
{
  /// Original indices in ranked order; index n denotes the dummy bidder.
  std::vector<std::size_t> sorted_order;
  /// Number of ranked bidders served at the uniform price.
  std::size_t k = 0;
  double      q = 0.0;
  PriceBranch branch = PriceBranch::PriceAboveNext;
  double      dummy_alpha = 1.0;
};

struct MechanismOptions
{
  double dummy_alpha = 1.0;
  /// Absolute quadrature tolerance per integration segment.
  double quadrature_tol = 1e-9;
  int    max_depth = 40;
};

/// Demand of a bidder with impact factor `alpha` at per-unit price `price`,
/// capped by the purchase limit.
inline double capped_demand(double alpha, double price)
{
  return std::min(alpha / (price + alpha), kPurchaseLimit);
}

/// Division point for ranked values (dummy included as the last, zero entry).
inline std::size_t division_point(std::span<const double> sorted_values,
                                  std::span<const double> sorted_alphas)
{
  if (sorted_values.size() != sorted_alphas.size() || sorted_values.size() < 2)
  {
    throw InvalidInput("division_point: need matching value/alpha lists of length >= 2");
  }
  if (sorted_values.back() != 0.0)
  {
    throw InvalidInput("division_point: the last (dummy) value must be zero");
  }
  for (std::size_t i = 0; i + 1 < sorted_values.size(); ++i)
  {
    if (sorted_values[i] < sorted_values[i + 1])
    {
      throw InvalidInput("division_point: values must be sorted in descending order");
    }
  }
  for (double const a : sorted_alphas)
  {
    if (!(a > 0.0)) throw InvalidInput("division_point: alpha must be positive");
  }

  std::size_t k = 0;
  for (std::size_t len = 1; len <= sorted_values.size(); ++len)
  {
    double const price = sorted_values[len - 1];
    double demand = 0.0;
    for (std::size_t i = 0; i < len; ++i) demand += capped_demand(sorted_alphas[i], price);
    if (demand <= 1.0 + 1e-12) k = len;
  }
  return k;
}

/// Smallest non-negative price at which the capped demands of the prefix
/// bidders sum to one.
inline double uniform_price(std::span<const double> prefix_alphas)
{
  if (prefix_alphas.size() < 2)
  {
    throw InvalidInput("uniform_price: at least two prefix bidders are required");
  }
  auto const demand = [&](double price) {
    double sum = 0.0;
    for (double const a : prefix_alphas) sum += capped_demand(a, price);
    return sum;
  };
  if (demand(0.0) <= 1.0 + 1e-12) return 0.0;
  double const max_alpha = *std::max_element(prefix_alphas.begin(), prefix_alphas.end());
  return numeric::left_edge_bisect(demand, 0.0, max_alpha, 1.0);
}

namespace detail {

/// Where a deviating bidder ranks among others reporting exactly the same value.
enum class TieRank
{
  ByIndex,  // ascending original index
  Above,
  Below,
};

struct RankedOutcome
{
  std::vector<std::size_t> order;   // over n real bidders plus the dummy (index n)
  std::vector<double>      shares;  // by original index, dummy last
  std::size_t k = 0;
  double      q = 0.0;
  PriceBranch branch = PriceBranch::PriceAboveNext;
};

class MechanismKernel
{
public:
  MechanismKernel(std::span<const double> values, std::span<const double> alphas, double dummy_alpha)
    : values_(values.begin(), values.end())
    , alphas_(alphas.begin(), alphas.end())
  {
    if (!(dummy_alpha > 0.0)) throw InvalidInput("dummy alpha must be positive");
    values_.push_back(0.0);
    alphas_.push_back(dummy_alpha);
    order_.resize(values_.size());
    sorted_values_.resize(values_.size());
    sorted_alphas_.resize(values_.size());
  }

  RankedOutcome const &run(std::size_t deviator, double report, TieRank tie)
  {
    std::size_t const dummy = values_.size() - 1;
    double const saved = values_[deviator];
    values_[deviator] = report;

    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      if (a == dummy || b == dummy) return b == dummy && a != dummy;
      if (values_[a] != values_[b]) return values_[a] > values_[b];
      if (tie != TieRank::ByIndex && (a == deviator || b == deviator))
      {
        return (a == deviator) == (tie == TieRank::Above);
      }
      return a < b;
    });
    for (std::size_t r = 0; r < order_.size(); ++r)
    {
      sorted_values_[r] = values_[order_[r]];
      sorted_alphas_[r] = alphas_[order_[r]];
    }
    values_[deviator] = saved;

    result_.order = order_;
    result_.shares.assign(order_.size(), 0.0);
    std::size_t const k = count_prefix();
    double const q = uniform_price(std::span<const double>(sorted_alphas_).first(k));
    double const next_value = sorted_values_[k];
    result_.k = k;
    result_.q = q;
    if (q > next_value)
    {
      result_.branch = PriceBranch::PriceAboveNext;
      for (std::size_t r = 0; r < k; ++r)
      {
        result_.shares[order_[r]] = capped_demand(sorted_alphas_[r], q);
      }
    }
    else
    {
      result_.branch = PriceBranch::PriceAtMostNext;
      double served = 0.0;
      for (std::size_t r = 0; r < k; ++r)
      {
        double const x = capped_demand(sorted_alphas_[r], next_value);
        result_.shares[order_[r]] = x;
        served += x;
      }
      result_.shares[order_[k]] = std::max(0.0, 1.0 - served);
    }
    return result_;
  }

  std::span<const double> values() const noexcept
  {
    return std::span<const double>(values_).first(values_.size() - 1);
  }

private:
  // Same rule as division_point, without re-validating the freshly sorted
  // arrays. The prefix demand grows with the prefix length, so the scan stops
  // at the first failure.
  std::size_t count_prefix() const
  {
    std::size_t k = 1;
    for (std::size_t len = 2; len <= sorted_values_.size(); ++len)
    {
      double const price = sorted_values_[len - 1];
      double demand = 0.0;
      for (std::size_t i = 0; i < len; ++i) demand += capped_demand(sorted_alphas_[i], price);
      if (demand > 1.0 + 1e-12) break;
      k = len;
    }
    return k;
  }

  std::vector<double>      values_;
  std::vector<double>      alphas_;
  std::vector<std::size_t> order_;
  std::vector<double>      sorted_values_;
  std::vector<double>      sorted_alphas_;
  RankedOutcome            result_;
};

}  // namespace detail

struct MechanismAllocation
{
  Allocation     allocation;
  MechanismTrace trace;
  /// Share of the dummy bidder; zero whenever the mechanism is correct.
  double dummy_share = 0.0;
};

inline MechanismAllocation allocate(AuctionInstance const &instance, double dummy_alpha = 1.0)
{
  detail::MechanismKernel kernel(instance.valuations(), instance.alphas(), dummy_alpha);
  auto const &ranked = kernel.run(0, instance.value(0), detail::TieRank::ByIndex);
  std::size_t const n = instance.size();

  MechanismAllocation out;
  out.dummy_share = ranked.shares[n];
  out.allocation = Allocation(std::vector<double>(ranked.shares.begin(), ranked.shares.begin() + n));
  out.trace.sorted_order = ranked.order;
  out.trace.k = ranked.k;
  out.trace.q = ranked.q;
  out.trace.branch = ranked.branch;
  out.trace.dummy_alpha = dummy_alpha;
  return out;
}

/// Share bidder j receives when it reports `report` and everybody else
/// keeps their instance valuation.
inline double allocation_curve(AuctionInstance const &instance, std::size_t j, double report,
                               double dummy_alpha = 1.0)
{
  detail::require_index(instance, j);
  if (!(report >= 0.0)) throw InvalidInput("report must be non-negative");
  detail::MechanismKernel kernel(instance.valuations(), instance.alphas(), dummy_alpha);
  return kernel.run(j, report, detail::TieRank::ByIndex).shares[j];
}

/// Myerson payment: v_j x_j(v_j) minus the area under bidder j's allocation
/// curve on [0, v_j].
///
/// The integral is split at the other bidders' values, where the ranking
/// changes and the curve may jump. On each piece the curve is continuous and
/// the endpoints are evaluated as one-sided limits from inside the piece.
inline double myerson_payment(AuctionInstance const &instance, std::size_t j,
                              MechanismOptions const &options = {})
{
  detail::require_index(instance, j);
  double const vj = instance.value(j);
  if (vj == 0.0) return 0.0;

  detail::MechanismKernel kernel(instance.valuations(), instance.alphas(), options.dummy_alpha);
  double const own_share = kernel.run(j, vj, detail::TieRank::ByIndex).shares[j];

  std::vector<double> cuts{0.0, vj};
  for (std::size_t o = 0; o < instance.size(); ++o)
  {
    double const v = instance.value(o);
    if (o != j && v > 0.0 && v < vj) cuts.push_back(v);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double area = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s)
  {
    double const lo = cuts[s];
    double const hi = cuts[s + 1];
    auto const curve = [&](double z) {
      auto const tie = z <= lo ? detail::TieRank::Above : detail::TieRank::Below;
      return kernel.run(j, z, tie).shares[j];
    };
    area += numeric::adaptive_simpson(curve, lo, hi, options.quadrature_tol, options.max_depth);
  }

  double const payment = vj * own_share - area;
  if (std::abs(payment) <= kTolerance) return 0.0;
  return payment;
}

struct MechanismRun
{
  Outcome        outcome;
  MechanismTrace trace;
  double         dummy_share = 0.0;
  /// Bidders charged above their budget; empty whenever the mechanism is correct.
  std::vector<std::size_t> budget_violations;
};

inline MechanismRun run_mechanism(AuctionInstance const &instance, MechanismOptions const &options = {})
{
  auto alloc = allocate(instance, options.dummy_alpha);
  MechanismRun run;
  run.trace = std::move(alloc.trace);
  run.dummy_share = alloc.dummy_share;
  run.outcome.allocation = std::move(alloc.allocation);
  run.outcome.payments.resize(instance.size());
  for (std::size_t j = 0; j < instance.size(); ++j)
  {
    run.outcome.payments[j] = myerson_payment(instance, j, options);
  }
  run.outcome.budgets = budgets(instance, run.outcome.allocation);
  run.outcome.liquid_welfare = liquid_welfare(instance, run.outcome.allocation);
  for (std::size_t j = 0; j < instance.size(); ++j)
  {
    if (run.outcome.payments[j] > run.outcome.budgets[j] + kTolerance)
    {
      run.budget_violations.push_back(j);
    }
  }
  return run;
}

}  // namespace budgetext
