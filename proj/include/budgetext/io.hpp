#pragma once

// JSON and CSV encodings for instances, results and sweep reports.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "budgetext/core_model.hpp"
#include "budgetext/mechanism.hpp"
#include "budgetext/optimal_alloc.hpp"
#include "budgetext/oracle.hpp"
#include "budgetext/verification.hpp"

namespace budgetext::io {

using nlohmann::json;

/// Parses {"valuations": [...], "alphas": [...]}. Errors name the offending field.
inline AuctionInstance parse_instance(std::string const &text)
{
  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (json::parse_error const &e)
  {
    throw InvalidInput(std::string("instance: malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidInput("instance: expected a JSON object");

  auto const numbers = [&](char const *field) {
    if (!doc.contains(field)) throw InvalidInput(std::string("instance: missing field \"") + field + "\"");
    auto const &arr = doc.at(field);
    if (!arr.is_array()) throw InvalidInput(std::string("instance: \"") + field + "\" must be an array");
    std::vector<double> out;
    out.reserve(arr.size());
    for (auto const &item : arr)
    {
      if (!item.is_number())
      {
        throw InvalidInput(std::string("instance: \"") + field + "\" must contain only numbers");
      }
      out.push_back(item.get<double>());
    }
    return out;
  };

  auto values = numbers("valuations");
  auto alphas = numbers("alphas");
  if (values.size() != alphas.size())
  {
    throw InvalidInput("instance: \"valuations\" and \"alphas\" have different lengths");
  }
  return AuctionInstance(std::move(values), std::move(alphas));
}

inline json to_json(AuctionInstance const &instance)
{
  return json{{"valuations", std::vector<double>(instance.valuations().begin(), instance.valuations().end())},
              {"alphas", std::vector<double>(instance.alphas().begin(), instance.alphas().end())}};
}

/// Doubles are written in shortest round-trip form (at most 17 significant
/// digits), so parse_instance(serialize_instance(i)) == i bit for bit.
inline std::string serialize_instance(AuctionInstance const &instance) { return to_json(instance).dump(); }

/// Formats with 17 significant digits; used for CSV cells.
inline std::string format_exact(double value)
{
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Rounds to `digits` significant digits for human-facing JSON.
inline double round_significant(double value, int digits = 12)
{
  if (!std::isfinite(value) || value == 0.0) return value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

inline json rounded(std::span<const double> values, int digits = 12)
{
  json arr = json::array();
  for (double v : values) arr.push_back(round_significant(v, digits));
  return arr;
}

inline json finite_or_null(double value, int digits = 17)
{
  if (!std::isfinite(value)) return nullptr;
  return digits >= 17 ? json(value) : json(round_significant(value, digits));
}

inline json to_json(OptimalResult const &result, AuctionInstance const &instance)
{
  json out{{"allocation", rounded(result.allocation.shares())},
           {"branch", to_string(result.trace.branch)},
           {"sorted_order", result.trace.sorted_order},
           {"liquid_welfare", round_significant(liquid_welfare(instance, result.allocation))}};
  if (result.trace.saturated_prefix) out["r"] = *result.trace.saturated_prefix;
  if (result.trace.residual_bidder) out["least_alpha_bidder"] = *result.trace.residual_bidder;
  return out;
}

inline json to_json(MechanismTrace const &trace)
{
  return json{{"sorted_order", trace.sorted_order},
              {"k", trace.k},
              {"q", round_significant(trace.q)},
              {"branch", to_string(trace.branch)},
              {"dummy_alpha", round_significant(trace.dummy_alpha)}};
}

inline json to_json(Utility const &u)
{
  if (u.is_budget_violated()) return "budget_violated";
  return round_significant(u.amount());
}

inline json to_json(MechanismRun const &run, AuctionInstance const &instance)
{
  json utilities = json::array();
  for (std::size_t j = 0; j < instance.size(); ++j)
  {
    utilities.push_back(to_json(utility(instance, run.outcome, j, instance.value(j))));
  }
  return json{{"allocation", rounded(run.outcome.allocation.shares())},
              {"payments", rounded(run.outcome.payments)},
              {"budgets", rounded(run.outcome.budgets)},
              {"utilities", utilities},
              {"liquid_welfare", round_significant(run.outcome.liquid_welfare)},
              {"trace", to_json(run.trace)}};
}

inline json to_json(OracleResult const &result)
{
  return json{{"best_allocation", rounded(result.best_allocation.shares())},
              {"best_lw", round_significant(result.best_lw)},
              {"resolution", result.resolution},
              {"refined", result.refined}};
}

inline json to_json(CheckReport const &report)
{
  json checks = json::object();
  for (std::size_t c = 0; c < kCheckCount; ++c)
  {
    auto const &check = report.checks[c];
    checks[std::string(kCheckNames[c])] = json{
      {"pass", check.pass}, {"witness", check.witness ? finite_or_null(*check.witness) : json(nullptr)}};
  }
  return json{{"instance_id", report.instance_id},
              {"checks", checks},
              {"ratio", finite_or_null(report.ratio)},
              {"alg_lw", finite_or_null(report.alg_lw)},
              {"opt_lw", finite_or_null(report.opt_lw)},
              {"max_dev_gain", finite_or_null(report.max_dev_gain)},
              {"all_pass", report.all_pass()}};
}

inline json to_json(SweepConfig const &config)
{
  return json{{"n_min", config.n_min},
              {"n_max", config.n_max},
              {"trials", config.trials},
              {"value_range", {config.values.lo, config.values.hi}},
              {"alpha_range", {config.alphas.lo, config.alphas.hi}},
              {"seed", config.seed},
              {"grid_size", config.verify.grid_size},
              {"tol", config.verify.tol}};
}

inline json to_json(ExperimentReport const &report)
{
  json rows = json::array();
  for (auto const &row : report.rows)
  {
    auto entry = to_json(row.report);
    entry["n"] = row.instance.size();
    entry["instance"] = to_json(row.instance);
    rows.push_back(std::move(entry));
  }
  return json{{"tool_version", report.tool_version},
              {"seed", report.config.seed},
              {"config", to_json(report.config)},
              {"aggregates",
               {{"min_ratio", finite_or_null(report.aggregates.min_ratio)},
                {"mean_ratio", finite_or_null(report.aggregates.mean_ratio)},
                {"max_dev_gain", finite_or_null(report.aggregates.max_dev_gain)},
                {"failures", report.aggregates.failures}}},
              {"rows", rows}};
}

/// One row per instance: instance_id, n, ratio, max_dev_gain, then one
/// boolean column per check.
inline std::string to_csv(ExperimentReport const &report)
{
  std::ostringstream out;
  out << "instance_id,n,ratio,max_dev_gain";
  for (auto const name : kCheckNames) out << ',' << name;
  out << '\n';
  for (auto const &row : report.rows)
  {
    out << row.report.instance_id << ',' << row.instance.size() << ',' << format_exact(row.report.ratio)
        << ',' << format_exact(row.report.max_dev_gain);
    for (auto const &check : row.report.checks) out << ',' << (check.pass ? "true" : "false");
    out << '\n';
  }
  return out.str();
}

}  // namespace budgetext::io
