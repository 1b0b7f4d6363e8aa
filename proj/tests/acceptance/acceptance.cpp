// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "budgetext/budgetext.hpp"

namespace {

using namespace budgetext;

constexpr std::uint64_t kOracleSeed = 20240601;
constexpr std::uint64_t kPropertySeed = 20240602;
constexpr std::uint64_t kSweepSeed = 20240603;
constexpr std::uint64_t kIncentiveSeed = 20240604;

SweepConfig random_config(std::size_t trials, std::uint64_t seed)
{
  SweepConfig config;
  config.n_min = 2;
  config.n_max = 4;
  config.trials = trials;
  config.values = {0.0, 10.0};
  config.alphas = {0.1, 10.0};
  config.seed = seed;
  config.verify.grid_size = 200;
  config.verify.tol = 1e-6;
  return config;
}

struct Criterion
{
  std::string name;
  std::function<bool(std::string &)> body;
};

std::string fmt(char const *format, double a, double b = 0.0, double c = 0.0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

bool optimality_vs_oracle(std::string &detail)
{
  auto const instances = sweep_instances(random_config(200, kOracleSeed));
  double worst = std::numeric_limits<double>::infinity();
  auto const start = std::chrono::steady_clock::now();
  for (auto const &inst : instances)
  {
    double const opt = liquid_welfare(inst, optimal_allocation(inst).allocation);
    double const grid = grid_search_lw(inst, 200).best_lw;
    worst = std::min(worst, opt - grid);
  }
  double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  detail = fmt("min(OPT - oracle) = %.3e over 200 instances, %.1f s", worst, seconds);
  return worst >= -1e-3 && seconds < 60.0;
}

bool structural_properties(std::string &detail)
{
  auto const instances = sweep_instances(random_config(1000, kPropertySeed));
  std::size_t failures = 0;
  for (auto const &inst : instances)
  {
    if (!check_opt_properties(inst, optimal_allocation(inst).allocation, 1e-9).all()) ++failures;
  }
  detail = fmt("%.0f of 1000 optimal allocations violate P1-P4", static_cast<double>(failures));
  return failures == 0;
}

bool closed_forms(std::string &detail)
{
  bool ok = true;
  AuctionInstance const pair({4.0, 1.0}, {2.0, 1.0});
  auto const opt = optimal_allocation(pair).allocation;
  double const opt_lw = liquid_welfare(pair, opt);
  double const a1 = 2.0;
  ok &= std::abs(opt[0] - 1.0 / 3.0) <= 1e-12 && std::abs(opt[1] - 2.0 / 3.0) <= 1e-12;
  ok &= std::abs(opt_lw - 5.0 / 3.0) <= 1e-12;
  ok &= std::abs(opt_lw - (a1 * a1 + 1.0) / (a1 + 1.0)) <= 1e-12;
  auto const mech = run_mechanism(pair);
  ok &= std::abs(mech.outcome.allocation[0] - 0.5) <= 1e-12 && std::abs(mech.outcome.allocation[1] - 0.5) <= 1e-12;
  ok &= std::abs(mech.outcome.liquid_welfare - 1.5) <= 1e-12;
  ok &= std::abs(mech.outcome.liquid_welfare / opt_lw - 0.9) <= 1e-12;

  AuctionInstance const three({3.0, 2.0, 1.0}, {1.0, 1.0, 1.0});
  double const opt3 = liquid_welfare(three, optimal_allocation(three).allocation);
  double const alg3 = run_mechanism(three).outcome.liquid_welfare;
  ok &= std::abs(opt3 - 11.0 / 6.0) <= 1e-12;
  ok &= std::abs(alg3 - 1.0) <= 1e-12;
  ok &= std::abs(alg3 / opt3 - 6.0 / 11.0) <= 1e-12;
  detail = fmt("pair: OPT LW %.15f, ratio %.15f; three: ratio %.15f", opt_lw, mech.outcome.liquid_welfare / opt_lw,
               alg3 / opt3);
  return ok;
}

bool mechanism_structure(std::string &detail)
{
  auto const instances = sweep_instances(random_config(1000, kPropertySeed));
  double worst_sum = 0.0, worst_cap = 0.0, worst_dummy_alpha = 0.0;
  std::size_t dummy_nonzero = 0, eq1_fail = 0;
  for (auto const &inst : instances)
  {
    std::size_t const n = inst.size();
    auto const base = allocate(inst, 1.0);
    worst_sum = std::max(worst_sum, std::abs(base.allocation.total() - 1.0));
    if (base.dummy_share != 0.0) ++dummy_nonzero;
    for (std::size_t i = 0; i < n; ++i) worst_cap = std::max(worst_cap, base.allocation[i] - 0.5);

    if (base.trace.branch == PriceBranch::PriceAtMostNext)
    {
      std::size_t const next = base.trace.sorted_order[base.trace.k];
      double const share = next == n ? base.dummy_share : base.allocation[next];
      double const v = next == n ? 0.0 : inst.value(next);
      double const a = next == n ? 1.0 : inst.alpha(next);
      if (share < 0.0 || !(share < std::min(a / (v + a), 0.5) + 1e-9)) ++eq1_fail;
    }

    for (double const dummy_alpha : {0.5, 7.0})
    {
      auto const other = allocate(inst, dummy_alpha);
      if (other.dummy_share != 0.0) ++dummy_nonzero;
      for (std::size_t i = 0; i < n; ++i)
      {
        worst_dummy_alpha = std::max(worst_dummy_alpha, std::abs(other.allocation[i] - base.allocation[i]));
      }
    }
  }
  detail = fmt("max |sum-1| %.2e, max x-1/2 %.2e, max dummy-alpha drift %.2e", worst_sum, worst_cap,
               worst_dummy_alpha) +
           fmt("; dummy>0: %.0f, Eq.1 failures: %.0f", static_cast<double>(dummy_nonzero), static_cast<double>(eq1_fail));
  return worst_sum <= 1e-9 && dummy_nonzero == 0 && worst_cap <= 1e-12 && eq1_fail == 0 &&
         worst_dummy_alpha <= 1e-12;
}

bool monotonicity(std::string &detail)
{
  auto const instances = sweep_instances(random_config(100, kIncentiveSeed));
  double worst_drop = 0.0;
  for (auto const &inst : instances)
  {
    for (std::size_t j = 0; j < inst.size(); ++j)
    {
      double previous = -1.0;
      for (double const z : deviation_grid(inst, j, 200))
      {
        double const share = allocation_curve(inst, j, z);
        worst_drop = std::max(worst_drop, previous - share);
        previous = std::max(previous, share);
      }
    }
  }
  detail = fmt("largest decrease along any curve %.3e", worst_drop);
  return worst_drop <= 1e-9;
}

bool budget_and_ir(std::string &detail)
{
  auto const instances = sweep_instances(random_config(1000, kPropertySeed));
  double worst_budget = -std::numeric_limits<double>::infinity();
  double worst_utility = std::numeric_limits<double>::infinity();
  for (auto const &inst : instances)
  {
    auto const run = run_mechanism(inst);
    for (std::size_t j = 0; j < inst.size(); ++j)
    {
      double const x = run.outcome.allocation[j];
      double const p = run.outcome.payments[j];
      worst_budget = std::max(worst_budget, p - inst.alpha(j) * (1.0 - x));
      worst_utility = std::min(worst_utility, inst.value(j) * x - p);
    }
  }
  detail = fmt("max p - alpha(1-x) = %.3e, min truthful utility = %.3e", worst_budget, worst_utility);
  return worst_budget <= 1e-6 && worst_utility >= -1e-6;
}

bool truthfulness(std::string &detail)
{
  auto const instances = sweep_instances(random_config(100, kIncentiveSeed));
  double worst_gain = -std::numeric_limits<double>::infinity();
  bool violated = false;
  for (auto const &inst : instances)
  {
    for (std::size_t j = 0; j < inst.size(); ++j)
    {
      auto const grid = deviation_grid(inst, j, 200);
      auto const dev = best_deviation(inst, j, inst.value(j), grid);
      worst_gain = std::max(worst_gain, dev.max_gain);
      violated |= dev.budget_violation_seen;
    }
  }
  detail = fmt("max deviation gain %.3e", worst_gain);
  return worst_gain <= 1e-6 && !violated;
}

bool approximation(std::string &detail)
{
  auto const report = sweep(random_config(1000, kSweepSeed), kVersion);
  detail = fmt("empirical min ratio %.6f, mean %.6f over 1000 instances (failed checks: %.0f)",
               report.aggregates.min_ratio, report.aggregates.mean_ratio,
               static_cast<double>(report.aggregates.failures));
  return report.aggregates.min_ratio >= 1.0 / 3.0 - 1e-9;
}

bool myerson_closed_form(std::string &detail)
{
  AuctionInstance const inst({5.0, 5.0, 5.0}, {1.0, 1.0, 1.0});
  double const expected = 2.0 * std::log(1.5) - 1.0 / 3.0;
  double worst = 0.0;
  for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(myerson_payment(inst, j) - expected));
  detail = fmt("expected %.9f, max error %.3e", expected, worst);
  return worst <= 1e-6;
}

bool upper_bound(std::string &detail)
{
  bool ok = true;
  double const far = upper_bound_rho(1e6);
  ok &= far >= 0.5 && far <= 0.501;
  double previous = 1.0;
  for (double const a1 : {2.0, 10.0, 1e2, 1e3, 1e4, 1e5, 1e6})
  {
    double const rho = upper_bound_rho(a1);
    ok &= rho <= previous && rho > 0.5 && rho < 1.0;
    previous = rho;
  }
  double const at2 = upper_bound_rho(2.0);
  ok &= std::abs(at2 - 0.93434) <= 1e-4;
  detail = fmt("rho(2) = %.6f, rho(1e6) = %.6f", at2, far);
  return ok;
}

}  // namespace

int main()
{
  std::vector<Criterion> const criteria{
    {"1 optimality vs oracle", optimality_vs_oracle},
    {"2 P1-P4 characterization", structural_properties},
    {"3 closed-form spot checks", closed_forms},
    {"4 mechanism structural invariants", mechanism_structure},
    {"5 monotone allocation curves", monotonicity},
    {"6 budget feasibility and IR", budget_and_ir},
    {"7 truthfulness", truthfulness},
    {"8 one-third approximation", approximation},
    {"9 Myerson payment closed form", myerson_closed_form},
    {"10 truthful upper-bound formula", upper_bound},
  };

  int failed = 0;
  for (auto const &criterion : criteria)
  {
    std::string detail;
    bool pass = false;
    try
    {
      pass = criterion.body(detail);
    }
    catch (std::exception const &e)
    {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", criterion.name.c_str(), detail.c_str());
    std::fflush(stdout);
    failed += pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
