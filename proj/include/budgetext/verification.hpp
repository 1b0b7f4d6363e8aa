#pragma once

// Executable checks of the mechanism's guarantees: structural invariants,
// monotone allocation curves, budget feasibility, individual rationality,
// truthfulness against a misreport grid and the one-third approximation
// against the optimal allocator. Also the two-bidder family behind the
// one-half ceiling for truthful mechanisms.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "budgetext/core_model.hpp"
#include "budgetext/mechanism.hpp"
#include "budgetext/optimal_alloc.hpp"
#include "budgetext/oracle.hpp"
#include "budgetext/parallel.hpp"
#include "budgetext/random.hpp"

namespace budgetext {

inline constexpr double kApproximationFloor = 1.0 / 3.0;
inline constexpr double kMonotonicityTolerance = 1e-9;
inline constexpr double kPurchaseLimitTolerance = 1e-12;
inline constexpr double kTieNudge = 1e-7;

enum class Check : std::size_t
{
  Monotonicity,
  BudgetFeasibility,
  IndividualRationality,
  Truthfulness,
  FullAllocation,
  PurchaseLimit,
  Eq1Bounds,
  OptProperties,
  ApproxRatio,
};

inline constexpr std::size_t kCheckCount = 9;

inline constexpr std::array<std::string_view, kCheckCount> kCheckNames{
  "monotonicity", "budget_feasibility", "ir",     "truthfulness", "full_allocation",
  "purchase_limit", "eq1_bounds",       "p1p4",   "approx_ratio",
};

inline std::string_view check_name(Check check) { return kCheckNames[static_cast<std::size_t>(check)]; }

struct CheckResult
{
  bool                  pass = true;
  std::optional<double> witness;
};

struct CheckReport
{
  std::string instance_id;
  std::array<CheckResult, kCheckCount> checks{};
  double ratio = 1.0;
  double alg_lw = 0.0;
  double opt_lw = 0.0;
  double max_dev_gain = -std::numeric_limits<double>::infinity();

  CheckResult const &operator[](Check check) const { return checks[static_cast<std::size_t>(check)]; }
  CheckResult &operator[](Check check) { return checks[static_cast<std::size_t>(check)]; }

  bool all_pass() const noexcept
  {
    return std::all_of(checks.begin(), checks.end(), [](CheckResult const &c) { return c.pass; });
  }

  std::size_t failures() const noexcept
  {
    return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](CheckResult const &c) { return !c.pass; }));
  }
};

/// `grid_size` evenly spaced reports on [0, 2 max v] for bidder j, each moved
/// off the other bidders' values so that no report ties with another bid.
inline std::vector<double> deviation_grid(AuctionInstance const &instance, std::size_t j,
                                          std::size_t grid_size)
{
  detail::require_index(instance, j);
  if (grid_size < 2) throw InvalidInput("deviation grid needs at least two points");
  auto const values = instance.valuations();
  double hi = 2.0 * *std::max_element(values.begin(), values.end());
  if (!(hi > 0.0)) hi = 1.0;

  std::vector<double> grid(grid_size);
  for (std::size_t t = 0; t < grid_size; ++t)
  {
    double z = hi * static_cast<double>(t) / static_cast<double>(grid_size - 1);
    for (bool moved = true; moved;)
    {
      moved = false;
      for (std::size_t o = 0; o < values.size(); ++o)
      {
        if (o != j && std::abs(z - values[o]) < 0.5 * kTieNudge)
        {
          z = values[o] + kTieNudge;
          moved = true;
        }
      }
    }
    grid[t] = z;
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

struct VerifyOptions
{
  std::size_t      grid_size = 200;
  /// Tolerance for payment-dependent checks (budget, IR, truthfulness).
  double           tol = 1e-6;
  MechanismOptions mechanism{};
};

inline CheckReport verify_instance(AuctionInstance const &instance, VerifyOptions const &options = {},
                                   std::string instance_id = {})
{
  std::size_t const n = instance.size();
  double const tol = options.tol;
  CheckReport report;
  report.instance_id = std::move(instance_id);

  auto const fail = [&](Check check, double witness) {
    auto &c = report[check];
    if (c.pass) c = CheckResult{false, witness};
  };

  auto const run = run_mechanism(instance, options.mechanism);
  auto const &x = run.outcome.allocation;
  auto const &p = run.outcome.payments;

  // Structural invariants of the allocation.
  double const total = x.total();
  if (std::abs(total - 1.0) > kTolerance) fail(Check::FullAllocation, total);
  if (run.dummy_share != 0.0) fail(Check::FullAllocation, run.dummy_share);

  for (std::size_t j = 0; j < n; ++j)
  {
    if (x[j] > kPurchaseLimit + kPurchaseLimitTolerance) fail(Check::PurchaseLimit, x[j]);
  }

  if (run.trace.branch == PriceBranch::PriceAtMostNext)
  {
    std::size_t const next = run.trace.sorted_order[run.trace.k];
    bool const is_dummy = next == n;
    double const share = is_dummy ? run.dummy_share : x[next];
    double const value = is_dummy ? 0.0 : instance.value(next);
    double const alpha = is_dummy ? run.trace.dummy_alpha : instance.alpha(next);
    double const cap = std::min(saturation_share(value, alpha), kPurchaseLimit);
    if (share < 0.0 || !(share < cap + kTolerance)) fail(Check::Eq1Bounds, share);
  }

  // Budget feasibility and individual rationality at truthful reports.
  for (std::size_t j = 0; j < n; ++j)
  {
    double const bound = instance.alpha(j) * (1.0 - x[j]);
    if (p[j] > bound + tol) fail(Check::BudgetFeasibility, p[j] - bound);
    double const u = instance.value(j) * x[j] - p[j];
    if (u < -tol) fail(Check::IndividualRationality, u);
  }
  if (!run.budget_violations.empty())
  {
    fail(Check::BudgetFeasibility, static_cast<double>(run.budget_violations.front()));
  }

  // Monotone curves and misreport search on tie-free grids.
  for (std::size_t j = 0; j < n; ++j)
  {
    auto const grid = deviation_grid(instance, j, options.grid_size);
    double previous = -std::numeric_limits<double>::infinity();
    for (double const z : grid)
    {
      double const share = allocation_curve(instance, j, z, options.mechanism.dummy_alpha);
      if (share < previous - kMonotonicityTolerance) fail(Check::Monotonicity, z);
      previous = std::max(previous, share);
    }

    auto const deviation = best_deviation(instance, j, instance.value(j), grid, options.mechanism);
    report.max_dev_gain = std::max(report.max_dev_gain, deviation.max_gain);
    if (deviation.budget_violation_seen) fail(Check::BudgetFeasibility, deviation.best_misreport);
  }
  if (report.max_dev_gain > tol) fail(Check::Truthfulness, report.max_dev_gain);

  // Optimum, its characterization, and the approximation ratio.
  auto const opt = optimal_allocation(instance);
  auto const props = check_opt_properties(instance, opt.allocation);
  if (!props.p1) fail(Check::OptProperties, 1.0);
  if (!props.p2) fail(Check::OptProperties, 2.0);
  if (!props.p3) fail(Check::OptProperties, 3.0);
  if (!props.p4) fail(Check::OptProperties, 4.0);

  report.alg_lw = run.outcome.liquid_welfare;
  report.opt_lw = liquid_welfare(instance, opt.allocation);
  // Both welfares vanish only when every valuation is zero.
  report.ratio = report.opt_lw > 0.0 ? report.alg_lw / report.opt_lw : 1.0;
  if (report.ratio < kApproximationFloor - kTolerance || report.ratio > 1.0 + kTolerance)
  {
    fail(Check::ApproxRatio, report.ratio);
  }
  return report;
}

/// The two instances (v1 = alpha1^2 and v1 = sqrt(alpha1), with v2 = alpha2 = 1)
/// whose optima pull any truthful mechanism in opposite directions.
inline std::pair<AuctionInstance, AuctionInstance> hard_instance_pair(double alpha1)
{
  if (!(alpha1 > 1.0)) throw InvalidInput("hard_instance_pair: alpha1 must exceed 1");
  return {AuctionInstance({alpha1 * alpha1, 1.0}, {alpha1, 1.0}),
          AuctionInstance({std::sqrt(alpha1), 1.0}, {alpha1, 1.0})};
}

/// Ceiling on the approximation ratio of any truthful mechanism implied by
/// the hard instance pair at `alpha1`. Tends to 1/2 as alpha1 grows.
inline double upper_bound_rho(double alpha1)
{
  if (!(alpha1 >= 1.0) || !std::isfinite(alpha1))
  {
    throw InvalidInput("upper_bound_rho: alpha1 must be a finite number >= 1");
  }
  double const high = (alpha1 * alpha1 + 1.0) / ((alpha1 + 1.0) * (alpha1 + 1.0));
  double const root = std::sqrt(alpha1) + 1.0;
  double const low = (alpha1 + 1.0) / (root * root);
  return 1.0 / (high + low);
}

struct SweepConfig
{
  std::size_t n_min = 2;
  std::size_t n_max = 4;
  std::size_t trials = 100;
  Range       values{0.0, 10.0};
  Range       alphas{0.1, 10.0};
  std::uint64_t seed = 1;
  VerifyOptions verify{};
};

struct SweepRow
{
  AuctionInstance instance;
  CheckReport     report;
};

struct SweepAggregates
{
  double min_ratio = std::numeric_limits<double>::infinity();
  double mean_ratio = 0.0;
  double max_dev_gain = -std::numeric_limits<double>::infinity();
  std::size_t failures = 0;  // failed checks summed over instances
};

struct ExperimentReport
{
  SweepConfig           config;
  std::vector<SweepRow> rows;
  SweepAggregates       aggregates;
  std::string           tool_version;
};

inline SweepAggregates aggregate(std::vector<SweepRow> const &rows)
{
  SweepAggregates agg;
  double sum = 0.0;
  for (auto const &row : rows)
  {
    agg.min_ratio = std::min(agg.min_ratio, row.report.ratio);
    agg.max_dev_gain = std::max(agg.max_dev_gain, row.report.max_dev_gain);
    agg.failures += row.report.failures();
    sum += row.report.ratio;
  }
  if (!rows.empty()) agg.mean_ratio = sum / static_cast<double>(rows.size());
  return agg;
}

/// Instances drawn in trial order from one generator seeded with config.seed.
inline std::vector<AuctionInstance> sweep_instances(SweepConfig const &config)
{
  if (config.trials < 1) throw InvalidInput("sweep: trials must be at least 1");
  if (config.n_min < 2 || config.n_max < config.n_min)
  {
    throw InvalidInput("sweep: need 2 <= n_min <= n_max");
  }
  Rng rng(config.seed);
  std::vector<AuctionInstance> instances;
  instances.reserve(config.trials);
  for (std::size_t t = 0; t < config.trials; ++t)
  {
    std::size_t const n = uniform_count(rng, config.n_min, config.n_max);
    instances.push_back(random_instance(n, config.values, config.alphas, rng));
  }
  return instances;
}

inline ExperimentReport sweep(SweepConfig const &config, std::string tool_version = {},
                              std::size_t threads = thread_count())
{
  auto const instances = sweep_instances(config);
  std::vector<std::optional<CheckReport>> reports(instances.size());
  parallel_for(
    instances.size(),
    [&](std::size_t t) { reports[t] = verify_instance(instances[t], config.verify, std::to_string(t)); },
    threads);

  ExperimentReport out;
  out.config = config;
  out.tool_version = std::move(tool_version);
  out.rows.reserve(instances.size());
  for (std::size_t t = 0; t < instances.size(); ++t)
  {
    out.rows.push_back(SweepRow{instances[t], std::move(*reports[t])});
  }
  out.aggregates = aggregate(out.rows);
  return out;
}

}  // namespace budgetext
