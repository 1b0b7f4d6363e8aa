#pragma once

// Auction model for a single divisible item whose buyers' budgets grow with
// the share of the item sold to everybody else.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace budgetext {

/// Absolute tolerance for feasibility and equality comparisons.
inline constexpr double kTolerance = 1e-9;

class InvalidInput : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class NumericalFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Bidder valuations (money per unit) and public budget impact factors.
///
/// The same type carries a reported bid profile: a bid profile is just an
/// instance whose valuations are the reports.
class AuctionInstance
{
public:
  AuctionInstance(std::vector<double> valuations, std::vector<double> alphas)
    : valuations_(std::move(valuations))
    , alphas_(std::move(alphas))
  {
    if (valuations_.size() != alphas_.size())
    {
      throw InvalidInput("valuations and alphas must have equal length");
    }
    if (valuations_.size() < 2)
    {
      throw InvalidInput("n < 2: at least two bidders are required");
    }
    for (std::size_t i = 0; i < valuations_.size(); ++i)
    {
      if (!std::isfinite(valuations_[i]) || valuations_[i] < 0.0)
      {
        throw InvalidInput("valuation must be finite and non-negative (bidder " +
                           std::to_string(i) + ")");
      }
      if (!std::isfinite(alphas_[i]) || !(alphas_[i] > 0.0))
      {
        throw InvalidInput("alpha must be positive (bidder " + std::to_string(i) + ")");
      }
    }
  }

  std::size_t size() const noexcept { return valuations_.size(); }
  double value(std::size_t i) const { return valuations_.at(i); }
  double alpha(std::size_t i) const { return alphas_.at(i); }
  std::span<const double> valuations() const noexcept { return valuations_; }
  std::span<const double> alphas() const noexcept { return alphas_; }

  /// Copy of this instance with bidder `i` reporting `report` instead.
  AuctionInstance with_value(std::size_t i, double report) const
  {
    auto values = valuations_;
    values.at(i) = report;
    return {std::move(values), alphas_};
  }

  /// Same bidders with every valuation and alpha multiplied by `factor`.
  AuctionInstance scaled(double factor) const
  {
    auto values = valuations_;
    auto alphas = alphas_;
    for (auto &v : values) v *= factor;
    for (auto &a : alphas) a *= factor;
    return {std::move(values), std::move(alphas)};
  }

  friend bool operator==(AuctionInstance const &, AuctionInstance const &) = default;

private:
  std::vector<double> valuations_;
  std::vector<double> alphas_;
};

/// Fractions of the item assigned to each bidder.
class Allocation
{
public:
  Allocation() = default;

  explicit Allocation(std::vector<double> shares)
    : shares_(std::move(shares))
  {
    double total = 0.0;
    for (std::size_t i = 0; i < shares_.size(); ++i)
    {
      double const x = shares_[i];
      if (!std::isfinite(x) || x < -kTolerance || x > 1.0 + kTolerance)
      {
        throw InvalidInput("allocation share out of [0,1] (bidder " + std::to_string(i) + ")");
      }
      total += x;
    }
    if (total > 1.0 + kTolerance)
    {
      throw InvalidInput("allocation over-allocates the item (sum " + std::to_string(total) + ")");
    }
  }

  std::size_t size() const noexcept { return shares_.size(); }
  double operator[](std::size_t i) const { return shares_[i]; }
  double at(std::size_t i) const { return shares_.at(i); }
  std::span<const double> shares() const noexcept { return shares_; }

  double total() const noexcept { return std::accumulate(shares_.begin(), shares_.end(), 0.0); }

  friend bool operator==(Allocation const &, Allocation const &) = default;

private:
  std::vector<double> shares_;
};

/// Quasi-linear utility, or the marker for a payment above the budget.
///
/// A budget violation compares below every finite utility.
class Utility
{
public:
  static Utility finite(double amount) { return Utility{amount, false}; }
  static Utility budget_violated() { return Utility{0.0, true}; }

  bool is_budget_violated() const noexcept { return violated_; }

  double amount() const
  {
    if (violated_) throw std::logic_error("utility is the budget-violated marker");
    return amount_;
  }

  friend bool operator<(Utility const &a, Utility const &b)
  {
    if (a.violated_ || b.violated_) return a.violated_ && !b.violated_;
    return a.amount_ < b.amount_;
  }

  friend bool operator==(Utility const &, Utility const &) = default;

private:
  Utility(double amount, bool violated)
    : amount_(violated ? 0.0 : amount)
    , violated_(violated)
  {}

  double amount_;
  bool   violated_;
};

struct Outcome
{
  Allocation          allocation;
  std::vector<double> payments;
  std::vector<double> budgets;
  double              liquid_welfare = 0.0;
};

namespace detail {

inline void require_matching(AuctionInstance const &instance, Allocation const &allocation)
{
  if (allocation.size() != instance.size())
  {
    throw InvalidInput("allocation length does not match the number of bidders");
  }
}

inline void require_index(AuctionInstance const &instance, std::size_t i)
{
  if (i >= instance.size())
  {
    throw std::out_of_range("bidder index " + std::to_string(i) + " out of range");
  }
}

}  // namespace detail

/// Budget of bidder i: alpha_i times everything allocated to the others.
inline double budget(AuctionInstance const &instance, Allocation const &allocation, std::size_t i)
{
  detail::require_index(instance, i);
  detail::require_matching(instance, allocation);
  double others = 0.0;
  for (std::size_t j = 0; j < allocation.size(); ++j)
  {
    if (j != i) others += allocation[j];
  }
  return instance.alpha(i) * std::max(others, 0.0);
}

inline std::vector<double> budgets(AuctionInstance const &instance, Allocation const &allocation)
{
  std::vector<double> out(instance.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = budget(instance, allocation, i);
  return out;
}

/// Utility of bidder i in `outcome` when its true per-unit value is `true_value`.
inline Utility utility(AuctionInstance const &instance, Outcome const &outcome, std::size_t i,
                       double true_value)
{
  detail::require_index(instance, i);
  double const payment = outcome.payments.at(i);
  if (payment > budget(instance, outcome.allocation, i) + kTolerance)
  {
    return Utility::budget_violated();
  }
  return Utility::finite(true_value * outcome.allocation[i] - payment);
}

namespace detail {

inline double liquid_welfare(std::span<const double> values, std::span<const double> alphas,
                             std::span<const double> shares)
{
  double const total = std::accumulate(shares.begin(), shares.end(), 0.0);
  double welfare = 0.0;
  for (std::size_t i = 0; i < shares.size(); ++i)
  {
    double const x = shares[i];
    welfare += std::min(values[i] * x, alphas[i] * std::max(total - x, 0.0));
  }
  return welfare;
}

}  // namespace detail

/// Sum over bidders of min(value obtained, budget).
inline double liquid_welfare(AuctionInstance const &instance, Allocation const &allocation)
{
  detail::require_matching(instance, allocation);
  return detail::liquid_welfare(instance.valuations(), instance.alphas(), allocation.shares());
}

/// Ceiling on liquid welfare for any feasible allocation.
inline double welfare_ceiling(AuctionInstance const &instance)
{
  double sum = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i)
  {
    sum += std::min(instance.value(i), instance.alpha(i));
  }
  return sum;
}

}  // namespace budgetext
