#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "husl/usl.hpp"

namespace husl {

struct EnumCaps {
  long long max_structures = 1'000'000;
  double time_budget_seconds = 600.0;
};

// One structure per isomorphism class, sizes 1..n, in deterministic order
// (by size, then canonical key). Throws CapExceeded when the budget runs out.
std::vector<FiniteUslTop> enumerate_usl_top(int n, const EnumCaps& caps = {});

// Memoizing wrapper; the cache is shared process-wide.
const std::vector<FiniteUslTop>& enumerate_usl_top_cached(int n);

// Isomorphism-class counts per size 1..n.
std::vector<long long> usl_top_counts(int n, const EnumCaps& caps = {});

}  // namespace husl
