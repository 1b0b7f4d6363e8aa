// budgetext: command-line front end for the optimal allocator, the
// uniform-price mechanism and the verification harness.
//
// Exit codes: 0 success, 1 a check failed (or a numerical failure), 2 bad input.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "budgetext/budgetext.hpp"

namespace {

using budgetext::io::json;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

budgetext::AuctionInstance load_instance(std::string const &path)
{
  std::ifstream in(path);
  if (!in) throw budgetext::InvalidInput("cannot open instance file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return budgetext::io::parse_instance(text.str());
}

void print(json const &doc) { std::cout << doc.dump(2) << '\n'; }

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Divisible-good auctions with budget externalities"};
  app.set_version_flag("--version", budgetext::kVersion);
  app.require_subcommand(1);

  std::string instance_path;

  auto *opt = app.add_subcommand("opt", "Welfare-optimal allocation");
  opt->add_option("--instance", instance_path, "Instance JSON file")->required();

  budgetext::MechanismOptions mech_options;
  auto *mech = app.add_subcommand("mech", "Run the uniform-price mechanism with Myerson payments");
  mech->add_option("--instance", instance_path, "Instance JSON file")->required();
  mech->add_option("--dummy-alpha", mech_options.dummy_alpha, "Impact factor of the dummy bidder")
    ->check(CLI::PositiveNumber);
  mech->add_option("--tol", mech_options.quadrature_tol, "Quadrature tolerance per segment")
    ->check(CLI::PositiveNumber);

  std::size_t resolution = 200;
  auto *oracle = app.add_subcommand("oracle", "Brute-force grid search for the welfare optimum");
  oracle->add_option("--instance", instance_path, "Instance JSON file")->required();
  oracle->add_option("--resolution", resolution, "Grid density m (x_i = k_i / m)")->required();

  budgetext::VerifyOptions verify_options;
  auto *verify = app.add_subcommand("verify", "Check every guarantee on one instance");
  verify->add_option("--instance", instance_path, "Instance JSON file")->required();
  verify->add_option("--grid-size", verify_options.grid_size, "Misreport grid points per bidder");
  verify->add_option("--tol", verify_options.tol, "Tolerance for payment-based checks");

  budgetext::SweepConfig sweep_config;
  std::string out_path;
  std::string format = "csv";
  auto *sweep = app.add_subcommand("sweep", "Verify a batch of seeded random instances");
  sweep->add_option("--trials", sweep_config.trials, "Number of instances")->required();
  sweep->add_option("--seed", sweep_config.seed, "Generator seed")->required();
  sweep->add_option("--n-min", sweep_config.n_min, "Fewest bidders");
  sweep->add_option("--n-max", sweep_config.n_max, "Most bidders");
  sweep->add_option("--v-min", sweep_config.values.lo, "Lower end of the valuation range");
  sweep->add_option("--v-max", sweep_config.values.hi, "Upper end of the valuation range");
  sweep->add_option("--alpha-min", sweep_config.alphas.lo, "Lower end of the alpha range");
  sweep->add_option("--alpha-max", sweep_config.alphas.hi, "Upper end of the alpha range");
  sweep->add_option("--grid-size", sweep_config.verify.grid_size, "Misreport grid points per bidder");
  sweep->add_option("--tol", sweep_config.verify.tol, "Tolerance for payment-based checks");
  sweep->add_option("--out", out_path, "Report file (stdout when omitted)");
  sweep->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  double alpha1 = 2.0;
  auto *bound = app.add_subcommand("bound", "Approximation ceiling for truthful mechanisms");
  bound->add_option("--alpha1", alpha1, "Impact factor of the high bidder (>= 1)")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (CLI::CallForHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForAllHelp const &e)
  {
    return app.exit(e);
  }
  catch (CLI::CallForVersion const &e)
  {
    return app.exit(e);
  }
  catch (CLI::ParseError const &e)
  {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitBadInput;
  }

  try
  {
    if (*opt)
    {
      auto const instance = load_instance(instance_path);
      print(budgetext::io::to_json(budgetext::optimal_allocation(instance), instance));
      return kExitOk;
    }
    if (*mech)
    {
      auto const instance = load_instance(instance_path);
      auto const run = budgetext::run_mechanism(instance, mech_options);
      print(budgetext::io::to_json(run, instance));
      if (!run.budget_violations.empty())
      {
        std::cerr << "warning: payment above budget for " << run.budget_violations.size() << " bidder(s)\n";
        return kExitCheckFailed;
      }
      return kExitOk;
    }
    if (*oracle)
    {
      auto const instance = load_instance(instance_path);
      print(budgetext::io::to_json(budgetext::grid_search_lw(instance, resolution)));
      return kExitOk;
    }
    if (*verify)
    {
      auto const instance = load_instance(instance_path);
      auto const report = budgetext::verify_instance(instance, verify_options, instance_path);
      print(budgetext::io::to_json(report));
      return report.all_pass() ? kExitOk : kExitCheckFailed;
    }
    if (*sweep)
    {
      auto const report = budgetext::sweep(sweep_config, budgetext::kVersion);
      std::string const body =
        format == "json" ? budgetext::io::to_json(report).dump(2) + "\n" : budgetext::io::to_csv(report);
      if (out_path.empty())
      {
        std::cout << body;
      }
      else
      {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw budgetext::InvalidInput("cannot write report file '" + out_path + "'");
        out << body;
        auto summary = budgetext::io::to_json(report);
        summary.erase("rows");
        print(summary);
      }
      return report.aggregates.failures == 0 ? kExitOk : kExitCheckFailed;
    }
    if (*bound)
    {
      json doc{{"alpha1", alpha1}, {"rho", budgetext::upper_bound_rho(alpha1)}};
      if (alpha1 > 1.0)
      {
        auto const [high, low] = budgetext::hard_instance_pair(alpha1);
        doc["instances"] = {budgetext::io::to_json(high), budgetext::io::to_json(low)};
      }
      print(doc);
      return kExitOk;
    }
  }
  catch (budgetext::InvalidInput const &e)
  {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitBadInput;
  }
  catch (std::out_of_range const &e)
  {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitBadInput;
  }
  catch (budgetext::NumericalFailure const &e)
  {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitBadInput;
}
