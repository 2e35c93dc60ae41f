#include "husl/usl.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cassert>
#include <map>

namespace husl {

namespace {

std::uint64_t low_bits(int n) {
  return n >= 64 ? ~0ull : ((1ull << n) - 1);
}

std::vector<std::string> default_names(int n) {
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "e" + std::to_string(i);
  return names;
}

}  // namespace

ElementId FiniteUslTop::meet(ElementId x, ElementId y) const {
  ElementId acc = bot_;
  for (ElementId z = 0; z < n_; ++z)
    if (leq(z, x) && leq(z, y)) acc = join(acc, z);
  return acc;
}

std::vector<ElementId> FiniteUslTop::coatoms() const {
  std::vector<ElementId> out;
  for (ElementId x = 0; x < n_; ++x) {
    if (x == top_) continue;
    bool covered = true;
    for (ElementId y = 0; y < n_; ++y)
      if (y != x && y != top_ && leq(x, y)) { covered = false; break; }
    if (covered) out.push_back(x);
  }
  return out;
}

Result<FiniteUslTop> FiniteUslTop::validate(int size, const std::vector<std::uint64_t>& up,
                                            ElementId bot, ElementId top,
                                            std::vector<std::string> names) {
  Result<FiniteUslTop> res;
  if (size < 1 || (int)up.size() != size || bot < 0 || bot >= size || top < 0 || top >= size) {
    res.diag = {"BadInput", "size/bot/top out of range", bot, top, {}};
    return res;
  }

  const std::uint64_t all = low_bits(size);
  for (ElementId x = 0; x < size; ++x) {
    if (up[x] & ~all) {
      res.diag = {"BadInput", "relation mentions out-of-range element", x, -1, {}};
      return res;
    }
    if (!((up[x] >> x) & 1u)) {
      res.diag = {"NotPartialOrder", "relation is not reflexive at " + std::to_string(x), x, x, {}};
      return res;
    }
  }
  for (ElementId x = 0; x < size; ++x)
    for (ElementId y = 0; y < size; ++y) {
      if (x != y && ((up[x] >> y) & 1u) && ((up[y] >> x) & 1u)) {
        res.diag = {"NotPartialOrder",
                    "antisymmetry fails on (" + std::to_string(x) + "," + std::to_string(y) + ")",
                    x, y, {}};
        return res;
      }
      if ((up[x] >> y) & 1u) {
        // everything above y must be above x
        if (up[y] & ~up[x]) {
          ElementId z = std::countr_zero(up[y] & ~up[x]);
          res.diag = {"NotPartialOrder",
                      "transitivity fails: " + std::to_string(x) + " <= " + std::to_string(y) +
                          " <= " + std::to_string(z) + " but not " + std::to_string(x) +
                          " <= " + std::to_string(z),
                      x, z, {}};
          return res;
        }
      }
    }

  if (up[bot] != all) {
    ElementId z = std::countr_zero(~up[bot] & all);
    res.diag = {"BotNotLeast", "bot is not below " + std::to_string(z), bot, z, {}};
    return res;
  }

  FiniteUslTop u;
  u.n_ = size;
  u.bot_ = bot;
  u.top_ = top;
  u.up_ = up;
  u.join_.assign(size, std::vector<ElementId>(size, -1));

  for (ElementId x = 0; x < size; ++x)
    for (ElementId y = x; y < size; ++y) {
      std::uint64_t ub = up[x] & up[y];
      ElementId least = -1;
      for (std::uint64_t m = ub; m; m &= m - 1) {
        ElementId c = std::countr_zero(m);
        if ((ub & ~up[c]) == 0) { least = c; break; }
      }
      if (least < 0) {
        std::vector<ElementId> minimal;
        for (std::uint64_t m = ub; m; m &= m - 1) {
          ElementId c = std::countr_zero(m);
          bool is_min = true;
          for (std::uint64_t m2 = ub; m2; m2 &= m2 - 1) {
            ElementId d = std::countr_zero(m2);
            if (d != c && ((up[d] >> c) & 1u)) { is_min = false; break; }
          }
          if (is_min) minimal.push_back(c);
        }
        res.diag = {"NoJoin",
                    "no least upper bound for (" + std::to_string(x) + "," + std::to_string(y) + ")",
                    x, y, minimal};
        return res;
      }
      u.join_[x][y] = u.join_[y][x] = least;
    }

  for (ElementId x = 0; x < size; ++x)
    if (!((up[x] >> top) & 1u)) {
      res.diag = {"TopNotGreatest", "element " + std::to_string(x) + " is not below top", x, top, {}};
      return res;
    }

  u.names_ = names.empty() ? default_names(size) : std::move(names);
  res.value = std::move(u);
  return res;
}

Result<FiniteUslTop> FiniteUslTop::from_covers(int size,
                                               const std::vector<std::pair<ElementId, ElementId>>& less,
                                               ElementId bot, ElementId top,
                                               std::vector<std::string> names) {
  std::vector<std::uint64_t> up(std::max(size, 1), 0);
  for (int i = 0; i < size; ++i) up[i] = 1ull << i;
  for (auto [a, b] : less)
    if (a >= 0 && a < size && b >= 0 && b < size) up[a] |= 1ull << b;
  // transitive closure
  for (bool changed = true; changed;) {
    changed = false;
    for (int x = 0; x < size; ++x) {
      std::uint64_t row = up[x];
      for (std::uint64_t m = row; m; m &= m - 1) row |= up[std::countr_zero(m)];
      if (row != up[x]) { up[x] = row; changed = true; }
    }
  }
  return validate(size, up, bot, top, std::move(names));
}

FiniteUslTop FiniteUslTop::singleton() {
  auto r = validate(1, {1}, 0, 0, {"0"});
  return *r;
}

FiniteUslTop FiniteUslTop::chain(int n) {
  assert(n >= 1);
  std::vector<std::uint64_t> up(n);
  for (int i = 0; i < n; ++i) up[i] = low_bits(n) & ~low_bits(i);
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) {
    if (i == 0) names[i] = "0";
    else if (i == n - 1) names[i] = "1";
    else names[i] = std::string(1, char('a' + i - 1));
  }
  if (n == 1) names[0] = "0";
  return *validate(n, up, 0, n - 1, std::move(names));
}

FiniteUslTop FiniteUslTop::diamond() {
  return *from_covers(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}, 0, 3, {"0", "a", "b", "1"});
}

Diagnostic check_substructure(const SubstructureWitness& w) {
  const auto& s = w.small;
  const auto& b = w.big;
  if ((int)w.inclusion.size() != s.size())
    return {"BadInclusion", "inclusion size mismatch", -1, -1, {}};
  std::uint64_t seen = 0;
  for (ElementId x = 0; x < s.size(); ++x) {
    ElementId im = w.inclusion[x];
    if (im < 0 || im >= b.size()) return {"BadInclusion", "image out of range", x, im, {}};
    if ((seen >> im) & 1u) return {"BadInclusion", "inclusion not injective", x, im, {}};
    seen |= 1ull << im;
  }
  if (w.inclusion[s.bot()] != b.bot()) return {"BadInclusion", "bot not preserved", s.bot(), -1, {}};
  if (w.inclusion[s.top()] != b.top()) return {"BadInclusion", "top not preserved", s.top(), -1, {}};
  for (ElementId x = 0; x < s.size(); ++x)
    for (ElementId y = 0; y < s.size(); ++y) {
      if (s.leq(x, y) != b.leq(w.inclusion[x], w.inclusion[y]))
        return {"BadInclusion", "order not preserved both ways", x, y, {}};
      if (w.inclusion[s.join(x, y)] != b.join(w.inclusion[x], w.inclusion[y]))
        return {"BadInclusion", "join not preserved", x, y, {}};
    }
  return {};
}

bool is_almost_end_extension(const SubstructureWitness& w) {
  std::uint64_t image = 0;
  for (ElementId im : w.inclusion) image |= 1ull << im;
  for (ElementId v = 0; v < w.big.size(); ++v) {
    if ((image >> v) & 1u) continue;
    for (ElementId u : w.inclusion)
      if (w.big.leq(v, u) && u != w.big.top()) return false;
  }
  return true;
}

SubstructureWitness generated_substructure(const FiniteUslTop& big,
                                           const std::vector<ElementId>& seed) {
  std::uint64_t in = (1ull << big.bot()) | (1ull << big.top());
  for (ElementId s : seed) in |= 1ull << s;
  for (bool changed = true; changed;) {
    changed = false;
    for (ElementId x = 0; x < big.size(); ++x) {
      if (!((in >> x) & 1u)) continue;
      for (ElementId y = x; y < big.size(); ++y) {
        if (!((in >> y) & 1u)) continue;
        ElementId j = big.join(x, y);
        if (!((in >> j) & 1u)) { in |= 1ull << j; changed = true; }
      }
    }
  }
  std::vector<ElementId> elems;
  for (ElementId x = 0; x < big.size(); ++x)
    if ((in >> x) & 1u) elems.push_back(x);
  std::vector<ElementId> pos(big.size(), -1);
  for (int i = 0; i < (int)elems.size(); ++i) pos[elems[i]] = i;
  int m = elems.size();
  std::vector<std::uint64_t> up(m, 0);
  std::vector<std::string> names(m);
  for (int i = 0; i < m; ++i) {
    names[i] = big.name(elems[i]);
    for (int j = 0; j < m; ++j)
      if (big.leq(elems[i], elems[j])) up[i] |= 1ull << j;
  }
  auto small = FiniteUslTop::validate(m, up, pos[big.bot()], pos[big.top()], std::move(names));
  assert(small.ok());
  SubstructureWitness w{std::move(*small), big, std::move(elems)};
  return w;
}

namespace {

// Iso-invariant refinement signature per element; used to prune relabelings.
std::vector<int> invariant_classes(const FiniteUslTop& u) {
  int n = u.size();
  std::vector<int> inv(n);
  for (int x = 0; x < n; ++x) {
    int upc = 0, dnc = 0;
    for (int y = 0; y < n; ++y) {
      if (u.leq(x, y)) ++upc;
      if (u.leq(y, x)) ++dnc;
    }
    inv[x] = upc * 256 + dnc;
  }
  // two refinement rounds over the multiset of neighbour invariants
  for (int round = 0; round < 2; ++round) {
    std::vector<std::vector<int>> sig(n);
    for (int x = 0; x < n; ++x) {
      std::vector<int> below, above;
      for (int y = 0; y < n; ++y) {
        if (y == x) continue;
        if (u.leq(y, x)) below.push_back(inv[y]);
        if (u.leq(x, y)) above.push_back(inv[y]);
      }
      std::sort(below.begin(), below.end());
      std::sort(above.begin(), above.end());
      sig[x].push_back(inv[x]);
      sig[x].push_back(-1);
      sig[x].insert(sig[x].end(), below.begin(), below.end());
      sig[x].push_back(-2);
      sig[x].insert(sig[x].end(), above.begin(), above.end());
    }
    std::map<std::vector<int>, int> ids;
    for (int x = 0; x < n; ++x) ids.emplace(sig[x], 0);
    int next = 0;
    for (auto& [k, v] : ids) v = next++;
    for (int x = 0; x < n; ++x) inv[x] = ids[sig[x]];
  }
  return inv;
}

// Enumerates relabelings old->position consistent with: bot at 0, top at
// n-1, middle elements grouped by invariant class (classes in increasing
// order). Calls fn with the placement old_at[position].
template <class Fn>
void for_each_placement(const FiniteUslTop& u, Fn&& fn) {
  int n = u.size();
  if (n == 1) {
    std::vector<ElementId> p{u.bot()};
    fn(p);
    return;
  }
  auto inv = invariant_classes(u);
  std::map<int, std::vector<ElementId>> groups;
  for (ElementId x = 0; x < n; ++x)
    if (x != u.bot() && x != u.top()) groups[inv[x]].push_back(x);

  std::vector<std::vector<ElementId>> blocks;
  for (auto& [k, v] : groups) blocks.push_back(v);

  std::vector<ElementId> placement;
  placement.push_back(u.bot());
  // recursive product of per-block permutations
  auto rec = [&](auto&& self, size_t bi) -> void {
    if (bi == blocks.size()) {
      auto full = placement;
      full.push_back(u.top());
      fn(full);
      return;
    }
    auto& blk = blocks[bi];
    std::sort(blk.begin(), blk.end());
    do {
      size_t at = placement.size();
      placement.insert(placement.end(), blk.begin(), blk.end());
      self(self, bi + 1);
      placement.resize(at);
    } while (std::next_permutation(blk.begin(), blk.end()));
  };
  rec(rec, 0);
}

std::vector<std::uint64_t> key_of_placement(const FiniteUslTop& u,
                                            const std::vector<ElementId>& old_at) {
  int n = u.size();
  std::vector<std::uint64_t> key(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (u.leq(old_at[i], old_at[j])) key[i] |= 1ull << j;
  return key;
}

}  // namespace

std::vector<std::uint64_t> canonical_key(const FiniteUslTop& u) {
  std::vector<std::uint64_t> best;
  for_each_placement(u, [&](const std::vector<ElementId>& old_at) {
    auto key = key_of_placement(u, old_at);
    if (best.empty() || key < best) best = std::move(key);
  });
  return best;
}

FiniteUslTop canonical_form(const FiniteUslTop& u) {
  std::vector<std::uint64_t> best;
  std::vector<ElementId> best_at;
  for_each_placement(u, [&](const std::vector<ElementId>& old_at) {
    auto key = key_of_placement(u, old_at);
    if (best.empty() || key < best) {
      best = std::move(key);
      best_at = old_at;
    }
  });
  int n = u.size();
  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = u.name(best_at[i]);
  auto r = FiniteUslTop::validate(n, best, 0, n == 1 ? 0 : n - 1, std::move(names));
  assert(r.ok());
  return *r;
}

namespace {

// Lex-least order-isomorphism u -> v with bot/top pinned; backtracking over
// source elements in index order.
bool extend_iso(const FiniteUslTop& u, const FiniteUslTop& v, std::vector<ElementId>& map,
                std::vector<bool>& used, ElementId x) {
  int n = u.size();
  while (x < n && map[x] >= 0) ++x;
  if (x == n) return true;
  for (ElementId t = 0; t < n; ++t) {
    if (used[t]) continue;
    bool okc = true;
    for (ElementId y = 0; y < n && okc; ++y) {
      if (map[y] < 0) continue;
      if (u.leq(x, y) != v.leq(t, map[y]) || u.leq(y, x) != v.leq(map[y], t)) okc = false;
    }
    if (!okc) continue;
    map[x] = t;
    used[t] = true;
    if (extend_iso(u, v, map, used, x + 1)) return true;
    map[x] = -1;
    used[t] = false;
  }
  return false;
}

}  // namespace

std::optional<std::vector<ElementId>> find_isomorphism(const FiniteUslTop& u,
                                                       const FiniteUslTop& v) {
  if (u.size() != v.size()) return std::nullopt;
  int n = u.size();
  std::vector<ElementId> map(n, -1);
  std::vector<bool> used(n, false);
  map[u.bot()] = v.bot();
  used[v.bot()] = true;
  if (u.top() != u.bot()) {
    if (v.top() == v.bot()) return std::nullopt;
    map[u.top()] = v.top();
    used[v.top()] = true;
  }
  if (extend_iso(u, v, map, used, 0)) return map;
  return std::nullopt;
}

std::vector<std::vector<ElementId>> automorphisms(const FiniteUslTop& u) {
  int n = u.size();
  std::vector<std::vector<ElementId>> out;
  std::vector<ElementId> map(n, -1);
  std::vector<bool> used(n, false);
  auto rec = [&](auto&& self, ElementId x) -> void {
    while (x < n && map[x] >= 0) ++x;
    if (x == n) {
      out.push_back(map);
      return;
    }
    for (ElementId t = 0; t < n; ++t) {
      if (used[t]) continue;
      bool okc = true;
      for (ElementId y = 0; y < n && okc; ++y) {
        if (map[y] < 0) continue;
        if (u.leq(x, y) != u.leq(t, map[y]) || u.leq(y, x) != u.leq(map[y], t)) okc = false;
      }
      if (!okc) continue;
      map[x] = t;
      used[t] = true;
      self(self, x + 1);
      map[x] = -1;
      used[t] = false;
    }
  };
  map[u.bot()] = u.bot();
  used[u.bot()] = true;
  if (u.top() != u.bot()) {
    map[u.top()] = u.top();
    used[u.top()] = true;
  }
  rec(rec, 0);
  return out;
}

}  // namespace husl
