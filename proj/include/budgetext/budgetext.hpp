#pragma once

#include "budgetext/core_model.hpp"
#include "budgetext/io.hpp"
#include "budgetext/mechanism.hpp"
#include "budgetext/numeric.hpp"
#include "budgetext/optimal_alloc.hpp"
#include "budgetext/oracle.hpp"
#include "budgetext/parallel.hpp"
#include "budgetext/random.hpp"
#include "budgetext/verification.hpp"

namespace budgetext {

inline constexpr char const *kVersion = "0.1.0";

}  // namespace budgetext
