#pragma once

// Seeded instance generation.
//
// The generator is std::mt19937_64, whose output sequence is fixed by the C++
// standard. Raw 64-bit draws are mapped to doubles by hand (top 53 bits) so
// that the instances do not depend on the standard library's distribution
// implementations.

#include <cstdint>
#include <random>
#include <vector>

#include "budgetext/core_model.hpp"

namespace budgetext {

using Rng = std::mt19937_64;

struct Range
{
  double lo = 0.0;
  double hi = 1.0;
};

/// Uniform double in [lo, hi).
inline double uniform(Rng &rng, Range range)
{
  double const unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return range.lo + (range.hi - range.lo) * unit;
}

/// Uniform integer in [lo, hi] (modulo reduction; the bias is negligible for
/// the small spans used here).
inline std::size_t uniform_count(Rng &rng, std::size_t lo, std::size_t hi)
{
  return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
}

inline AuctionInstance random_instance(std::size_t n, Range value_range, Range alpha_range, Rng &rng)
{
  if (n < 2) throw InvalidInput("random_instance: n must be at least 2");
  if (!(value_range.lo >= 0.0) || !(value_range.hi > value_range.lo))
  {
    throw InvalidInput("random_instance: value range must satisfy 0 <= lo < hi");
  }
  if (!(alpha_range.lo > 0.0) || !(alpha_range.hi > alpha_range.lo))
  {
    throw InvalidInput("random_instance: alpha range must satisfy 0 < lo < hi");
  }
  std::vector<double> values(n), alphas(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    values[i] = uniform(rng, value_range);
    alphas[i] = uniform(rng, alpha_range);
  }
  return {std::move(values), std::move(alphas)};
}

}  // namespace budgetext
