#include "husl/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <map>
#include <mutex>

namespace husl {

namespace {

using Clock = std::chrono::steady_clock;

// Strict orders on the k middle elements compatible with the index order
// (every finite poset admits such a labeling, so up to isomorphism nothing
// is lost). Pairs are (i,j) with i < j.
void middle_orders(int k, const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  const int np = pairs.size();
  std::vector<std::uint64_t> rel(k, 0);  // rel[i] bit j: i < j strictly

  auto rec = [&](auto&& self, int p) -> void {
    if (p == np) {
      // transitivity: i<j and j<l implies i<l
      for (int i = 0; i < k; ++i) {
        std::uint64_t need = 0;
        for (std::uint64_t m = rel[i]; m; m &= m - 1) need |= rel[std::countr_zero(m)];
        if (need & ~rel[i]) return;
      }
      fn(rel);
      return;
    }
    auto [i, j] = pairs[p];
    self(self, p + 1);
    rel[i] |= 1ull << j;
    self(self, p + 1);
    rel[i] &= ~(1ull << j);
  };
  rec(rec, 0);
}

std::vector<FiniteUslTop> enumerate_size(int s, const EnumCaps& caps, Clock::time_point start,
                                         long long& emitted) {
  std::vector<FiniteUslTop> out;
  if (s == 1) {
    out.push_back(FiniteUslTop::singleton());
    return out;
  }
  if (s == 2) {
    out.push_back(FiniteUslTop::chain(2));
    return out;
  }
  const int k = s - 2;
  std::map<std::vector<std::uint64_t>, FiniteUslTop> classes;
  long long ticks = 0;
  middle_orders(k, [&](const std::vector<std::uint64_t>& rel) {
    if (((++ticks) & 0xFFF) == 0 &&
        std::chrono::duration<double>(Clock::now() - start).count() > caps.time_budget_seconds)
      throw CapExceeded{"enumerate_usl_top: time budget exhausted"};
    // embed: 0 = bot, 1..k = middle, s-1 = top
    std::vector<std::uint64_t> up(s, 0);
    const std::uint64_t all = (s >= 64) ? ~0ull : ((1ull << s) - 1);
    up[0] = all;
    up[s - 1] = 1ull << (s - 1);
    for (int i = 0; i < k; ++i)
      up[i + 1] = (1ull << (i + 1)) | (rel[i] << 1) | (1ull << (s - 1));
    auto r = FiniteUslTop::validate(s, up, 0, s - 1);
    if (!r.ok()) return;  // join totality (or other axiom) fails
    auto key = canonical_key(*r);
    if (!classes.count(key)) {
      if ((long long)classes.size() + emitted >= caps.max_structures)
        throw CapExceeded{"enumerate_usl_top: structure budget exhausted"};
      classes.emplace(std::move(key), canonical_form(*r));
    }
  });
  for (auto& [k2, v] : classes) out.push_back(std::move(v));
  emitted += out.size();
  return out;
}

}  // namespace

std::vector<FiniteUslTop> enumerate_usl_top(int n, const EnumCaps& caps) {
  auto start = Clock::now();
  long long emitted = 0;
  std::vector<FiniteUslTop> out;
  for (int s = 1; s <= n; ++s) {
    auto batch = enumerate_size(s, caps, start, emitted);
    for (auto& u : batch) out.push_back(std::move(u));
  }
  return out;
}

const std::vector<FiniteUslTop>& enumerate_usl_top_cached(int n) {
  static std::mutex mu;
  static std::map<int, std::vector<FiniteUslTop>> cache;
  std::scoped_lock lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, enumerate_usl_top(n)).first;
  return it->second;
}

std::vector<long long> usl_top_counts(int n, const EnumCaps& caps) {
  auto all = enumerate_usl_top(n, caps);
  std::vector<long long> counts(n, 0);
  for (const auto& u : all) counts[u.size() - 1]++;
  return counts;
}

}  // namespace husl
