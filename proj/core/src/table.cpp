#include "husl/table.hpp"

#include <algorithm>
#include <chrono>
#include <set>

namespace husl {

namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxFailures = 16;

void add_failure(TableReport& r, TableReport::Failure f) {
  if ((int)r.failures.size() < kMaxFailures) r.failures.push_back(std::move(f));
}

// mask of lattice elements where the two maps agree
std::uint64_t agree_mask(const TableMap& a, const TableMap& b) {
  std::uint64_t m = 0;
  for (size_t x = 0; x < a.size(); ++x)
    if (a[x] == b[x]) m |= 1ull << x;
  return m;
}

}  // namespace

int UslTable::find(const TableMap& m) const {
  for (size_t i = 0; i < maps.size(); ++i)
    if (maps[i] == m) return (int)i;
  return -1;
}

std::string TableReport::summary() const {
  if (failures.empty()) return "pass";
  std::string s;
  for (const auto& f : failures) {
    if (!s.empty()) s += "; ";
    s += f.axiom;
    if (f.x >= 0) s += " at x=" + std::to_string(f.x) + (f.y >= 0 ? ",y=" + std::to_string(f.y) : "");
    if (f.alpha >= 0) s += " maps " + std::to_string(f.alpha) + "," + std::to_string(f.beta);
    if (!f.detail.empty()) s += " (" + f.detail + ")";
  }
  return s;
}

bool CodingApparatus::in_c(int map_index) const {
  return std::find(coding_set.begin(), coding_set.end(), map_index) != coding_set.end();
}

TableReport verify_table(const UslTable& t) {
  TableReport rep;
  const auto& l = t.lattice;
  const int n = l.size(), tm = (int)t.maps.size();

  bool has_zero = false;
  for (int a = 0; a < tm; ++a) {
    if ((int)t.maps[a].size() != n) {
      add_failure(rep, {"MapArity", -1, -1, a, -1, "map not total on the lattice"});
      return rep;
    }
    if (t.maps[a][l.bot()] != 0)
      add_failure(rep, {"BotNotZero", l.bot(), -1, a, -1, ""});
    has_zero |= std::all_of(t.maps[a].begin(), t.maps[a].end(), [](int v) { return v == 0; });
  }
  if (!has_zero) add_failure(rep, {"NoZeroMap", -1, -1, -1, -1, ""});

  for (ElementId x = 0; x < n && rep.failures.empty(); ++x)
    for (ElementId y = 0; y < n; ++y) {
      if (!l.leq(x, y) || x == y) continue;
      bool bad = false;
      for (int a = 0; a < tm && !bad; ++a)
        for (int b = a + 1; b < tm && !bad; ++b)
          if (t.eq_at(a, b, y) && !t.eq_at(a, b, x)) {
            add_failure(rep, {"Order", x, y, a, b, ""});
            bad = true;
          }
      if (bad) break;
    }

  for (ElementId x = 0; x < n; ++x)
    for (ElementId y = 0; y < n; ++y) {
      if (l.leq(x, y)) continue;
      bool found = false;
      for (int a = 0; a < tm && !found; ++a)
        for (int b = 0; b < tm && !found; ++b)
          found = t.eq_at(a, b, y) && !t.eq_at(a, b, x);
      if (!found) add_failure(rep, {"Differentiation", x, y, -1, -1, ""});
    }

  for (ElementId x = 0; x < n; ++x)
    for (ElementId y = 0; y < n; ++y) {
      ElementId z = l.join(x, y);
      for (int a = 0; a < tm; ++a)
        for (int b = a + 1; b < tm; ++b)
          if (t.eq_at(a, b, x) && t.eq_at(a, b, y) && !t.eq_at(a, b, z)) {
            add_failure(rep, {"Join", x, y, a, b, "fails at join " + std::to_string(z)});
            return rep;
          }
    }
  return rep;
}

TableReport check_meet_interpolants(const UslTable& inner, const UslTable& outer) {
  TableReport rep;
  const auto& l = inner.lattice;
  const int ni = (int)inner.maps.size(), no = (int)outer.maps.size();
  for (ElementId x = 0; x < l.size(); ++x)
    for (ElementId y = 0; y < l.size(); ++y) {
      ElementId z = l.meet(x, y);
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b) {
          if (!inner.eq_at(a, b, z)) continue;
          bool found = false;
          for (int g0 = 0; g0 < no && !found; ++g0) {
            if (inner.maps[a][x] != outer.maps[g0][x]) continue;
            for (int g1 = 0; g1 < no && !found; ++g1) {
              if (outer.maps[g0][y] != outer.maps[g1][y]) continue;
              for (int g2 = 0; g2 < no && !found; ++g2)
                found = outer.maps[g1][x] == outer.maps[g2][x] &&
                        outer.maps[g2][y] == inner.maps[b][y];
            }
          }
          if (!found) {
            add_failure(rep, {"MeetInterpolant", x, y, a, b, ""});
            if ((int)rep.failures.size() >= kMaxFailures) return rep;
          }
        }
    }
  return rep;
}

namespace {

// Congruence-preserving-map feasibility with two pinned arguments, memoized.
struct HomSearcher {
  const UslTable& inner;
  const UslTable& outer;
  std::vector<bool> forbidden;  // outer indices off limits for non-pinned arguments
  int ni, no;
  std::vector<std::uint64_t> irel, orel;  // agreement masks, flattened
  std::vector<signed char> memo;          // 0 unknown, 1 yes, 2 no
  long long nodes = 0, node_budget;
  bool budget_hit = false;

  HomSearcher(const UslTable& in, const UslTable& out, const CodingApparatus* coding,
              long long budget)
      : inner(in), outer(out), ni((int)in.maps.size()), no((int)out.maps.size()),
        node_budget(budget) {
    irel.resize((size_t)ni * ni);
    for (int a = 0; a < ni; ++a)
      for (int b = 0; b < ni; ++b) irel[(size_t)a * ni + b] = agree_mask(in.maps[a], in.maps[b]);
    orel.resize((size_t)no * no);
    for (int a = 0; a < no; ++a)
      for (int b = 0; b < no; ++b) orel[(size_t)a * no + b] = agree_mask(out.maps[a], out.maps[b]);
    forbidden.assign(no, false);
    if (coding)
      for (int c : coding->coding_set)
        if (c >= 0 && c < no) forbidden[c] = true;
    memo.assign((size_t)ni * ni * no * no, 0);
  }

  bool consistent(const std::vector<int>& f, int a, int v) const {
    for (int b = 0; b < ni; ++b) {
      if (f[b] < 0) continue;
      if (irel[(size_t)a * ni + b] & ~orel[(size_t)v * no + f[b]]) return false;
    }
    return true;
  }

  bool extend(std::vector<int>& f, int p0, int p1) {
    int a = 0;
    while (a < ni && f[a] >= 0) ++a;
    if (a == ni) return true;
    for (int v = 0; v < no; ++v) {
      if (++nodes > node_budget) { budget_hit = true; return false; }
      if (forbidden[v] && a != p0 && a != p1) continue;
      if (!consistent(f, a, v)) continue;
      f[a] = v;
      if (extend(f, p0, p1)) return true;
      f[a] = -1;
    }
    return false;
  }

  bool feasible(int p0, int p1, int w0, int w1) {
    size_t key = (((size_t)p0 * ni + p1) * no + w0) * no + w1;
    if (memo[key]) return memo[key] == 1;
    bool ok = false;
    if (!(p0 == p1 && w0 != w1) && !(irel[(size_t)p0 * ni + p1] & ~orel[(size_t)w0 * no + w1])) {
      std::vector<int> f(ni, -1);
      f[p0] = w0;
      f[p1] = w1;
      ok = extend(f, p0, p1);
    }
    memo[key] = ok ? 1 : 2;
    return ok;
  }
};

}  // namespace

TableReport check_homogeneity_interpolants(const UslTable& inner, const UslTable& outer,
                                           const CodingApparatus* coding) {
  TableReport rep;
  const int ni = (int)inner.maps.size(), no = (int)outer.maps.size();
  if ((size_t)ni * ni * no * no > (size_t)128 * 1024 * 1024) {
    add_failure(rep, {"HomogeneityInterpolant", -1, -1, -1, -1, "tables too large for the checker"});
    return rep;
  }
  HomSearcher hs(inner, outer, coding, 200'000'000);

  for (int a0 = 0; a0 < ni; ++a0)
    for (int a1 = 0; a1 < ni; ++a1) {
      std::uint64_t arel = hs.irel[(size_t)a0 * ni + a1];
      for (int b0 = 0; b0 < ni; ++b0)
        for (int b1 = 0; b1 < ni; ++b1) {
          // hypothesis: a0 =_x a1 implies b0 =_x b1, for every x
          if (arel & ~hs.irel[(size_t)b0 * ni + b1]) continue;
          bool found = false;
          // pins refer to outer indices of the inner beta maps
          int ob0 = outer.find(inner.maps[b0]);
          int ob1 = outer.find(inner.maps[b1]);
          if (ob0 < 0 || ob1 < 0) {
            add_failure(rep, {"HomogeneityInterpolant", -1, -1, b0, b1, "inner not within outer"});
            return rep;
          }
          for (int g0 = 0; g0 < no && !found; ++g0) {
            if (!hs.feasible(a0, a1, g0, ob1)) continue;  // h
            for (int g1 = 0; g1 < no && !found; ++g1)
              found = hs.feasible(a0, a1, ob0, g1)        // f
                      && hs.feasible(a0, a1, g0, g1);     // g
          }
          if (hs.budget_hit) {
            add_failure(rep, {"HomogeneityInterpolant", -1, -1, a0, a1, "search budget exhausted"});
            return rep;
          }
          if (!found) {
            add_failure(rep, {"HomogeneityInterpolant", -1, -1, a0, a1,
                              "no interpolants for betas " + std::to_string(b0) + "," +
                                  std::to_string(b1)});
            if ((int)rep.failures.size() >= kMaxFailures) return rep;
          }
        }
    }
  return rep;
}

const UslTable& RepPrefix::stage_at(int j) const {
  if (j < 0) j = 0;
  if (j >= (int)theta.size()) j = (int)theta.size() - 1;
  return theta[j];
}

namespace {

// value-set inclusion of map lists
bool table_subset(const UslTable& a, const UslTable& b) {
  for (const auto& m : a.maps)
    if (b.find(m) < 0) return false;
  return true;
}

}  // namespace

TableReport verify_rep_prefix(const RepPrefix& r) {
  TableReport rep;
  if (r.theta.empty()) {
    add_failure(rep, {"Stages", -1, -1, -1, -1, "no stages"});
    return rep;
  }
  bool starred = !r.theta_star.empty();
  if (starred && r.theta_star.size() != r.theta.size() - 1) {
    add_failure(rep, {"Stages", -1, -1, -1, -1, "starred stage count mismatch"});
    return rep;
  }

  auto check_stage = [&](const UslTable& t, const std::string& label) {
    auto sub = verify_table(t);
    for (auto& f : sub.failures) {
      f.detail = label + (f.detail.empty() ? "" : ": " + f.detail);
      add_failure(rep, f);
    }
  };
  for (size_t i = 0; i < r.theta.size(); ++i)
    check_stage(r.theta[i], "theta" + std::to_string(i));
  for (size_t i = 0; i < r.theta_star.size(); ++i)
    check_stage(r.theta_star[i], "theta" + std::to_string(i + 1) + "*");
  if (!rep.pass()) return rep;

  for (size_t i = 0; i + 1 < r.theta.size(); ++i) {
    const UslTable& mid = starred ? r.theta_star[i] : r.theta[i + 1];
    if (!table_subset(r.theta[i], mid) || (starred && !table_subset(mid, r.theta[i + 1])))
      add_failure(rep, {"Nesting", -1, -1, (int)i, -1, "stage not contained in the next"});
    if (i == 0 && starred &&
        (r.theta[0].maps.size() >= mid.maps.size() ||
         mid.maps.size() >= r.theta[1].maps.size()))
      add_failure(rep, {"Nesting", -1, -1, 0, -1, "first starred inclusions must be strict"});

    auto meet = check_meet_interpolants(r.theta[i], mid);
    for (auto& f : meet.failures) add_failure(rep, f);

    const UslTable& hin = starred ? r.theta_star[i] : r.theta[i];
    auto hom = check_homogeneity_interpolants(hin, r.theta[i + 1],
                                              r.coding ? &*r.coding : nullptr);
    for (auto& f : hom.failures) add_failure(rep, f);
    if ((int)rep.failures.size() >= kMaxFailures) return rep;
  }
  return rep;
}

int escape_map(const RepPrefix& r, int coding_map, ElementId x) {
  if (!r.coding) return -1;
  const UslTable& t0 = r.theta[0];
  for (int m = 0; m < (int)t0.maps.size(); ++m)
    if (!r.coding->in_c(m) && t0.eq_at(m, coding_map, x)) return m;
  return -1;
}

TableReport verify_coding_ready(const RepPrefix& r) {
  TableReport rep = verify_rep_prefix(r);
  if (!rep.pass()) return rep;
  if (!r.coding || r.theta_star.empty()) {
    add_failure(rep, {"Coding", -1, -1, -1, -1, "coding apparatus or starred stages missing"});
    return rep;
  }
  const auto& c = *r.coding;
  const UslTable& t0 = r.theta[0];
  const auto& l = r.lattice;

  for (int m : c.coding_set)
    if (m < 0 || m >= (int)t0.maps.size()) {
      add_failure(rep, {"Coding", -1, -1, m, -1, "coding index out of range"});
      return rep;
    }
  if (c.coding_set.size() >= t0.maps.size())
    add_failure(rep, {"Coding", -1, -1, -1, -1, "C must be a proper subset of theta0"});

  // g must biject the ordered top-join pairs (with a bit) onto C
  std::set<std::tuple<ElementId, ElementId, int>> domain;
  for (ElementId x = 0; x < l.size(); ++x)
    for (ElementId y = 0; y < l.size(); ++y)
      if (x != l.top() && y != l.top() && l.join(x, y) == l.top())
        for (int k = 0; k < 2; ++k) domain.insert({x, y, k});
  std::set<int> image;
  for (const auto& [key, m] : c.g) {
    if (!domain.count(key))
      add_failure(rep, {"Coding", std::get<0>(key), std::get<1>(key), m, -1, "g key outside domain"});
    if (!c.in_c(m)) add_failure(rep, {"Coding", -1, -1, m, -1, "g value outside C"});
    image.insert(m);
  }
  if (c.g.size() != domain.size() || image.size() != c.g.size() ||
      image.size() != c.coding_set.size())
    add_failure(rep, {"Coding", -1, -1, -1, -1, "g is not a bijection onto C"});
  if (!rep.pass()) return rep;

  // property (3)
  for (const auto& [key, m0] : c.g) {
    auto [x, y, k] = key;
    if (k != 0) continue;
    int m1 = c.g.at({x, y, 1});
    if (!t0.eq_at(m0, m1, x))
      add_failure(rep, {"Property3", x, y, m0, m1, "g(x,y,0) and g(x,y,1) differ at x"});
    if (t0.eq_at(m0, m1, y))
      add_failure(rep, {"Property3", x, y, m0, m1, "g(x,y,0) and g(x,y,1) agree at y"});
  }

  // property (4): an escape outside C for every coding map and every x != top
  for (int m : c.coding_set)
    for (ElementId x = 0; x < l.size(); ++x) {
      if (x == l.top()) continue;
      if (escape_map(r, m, x) < 0) add_failure(rep, {"Property4", x, -1, m, -1, "no escape"});
    }

  // differentiation witnessed outside C
  for (ElementId x = 0; x < l.size(); ++x)
    for (ElementId y = 0; y < l.size(); ++y) {
      if (l.leq(x, y)) continue;
      bool found = false;
      for (int a = 0; a < (int)t0.maps.size() && !found; ++a)
        for (int b = 0; b < (int)t0.maps.size() && !found; ++b)
          found = !c.in_c(a) && !c.in_c(b) && t0.eq_at(a, b, y) && !t0.eq_at(a, b, x);
      if (!found) add_failure(rep, {"DifferentiationOutsideC", x, y, -1, -1, ""});
    }

  // property (5): fresh congruence-matched pairs in the next starred stage
  for (size_t i = 0; i < r.theta_star.size(); ++i) {
    const UslTable& ti = r.theta[i];
    std::vector<int> pool;  // star maps not in theta_i
    for (int m = 0; m < (int)r.theta_star[i].maps.size(); ++m)
      if (ti.find(r.theta_star[i].maps[m]) < 0) pool.push_back(m);
    for (ElementId x : l.coatoms())
      for (int a0 = 0; a0 < (int)ti.maps.size(); ++a0)
        for (int a1 = 0; a1 < (int)ti.maps.size(); ++a1) {
          std::uint64_t need = agree_mask(ti.maps[a0], ti.maps[a1]);
          bool found = false;
          for (int b0 : pool) {
            if (r.theta_star[i].maps[b0][x] != ti.maps[a0][x]) continue;
            for (int b1 : pool) {
              if (r.theta_star[i].maps[b1][x] != ti.maps[a1][x]) continue;
              if (need & ~agree_mask(r.theta_star[i].maps[b0], r.theta_star[i].maps[b1])) continue;
              found = true;
              break;
            }
            if (found) break;
          }
          if (!found) {
            add_failure(rep, {"Property5", x, -1, a0, a1, "stage " + std::to_string(i)});
            if ((int)rep.failures.size() >= kMaxFailures) return rep;
          }
        }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// build_table: search over per-element congruence partitions

namespace {

using Partition = std::vector<int>;  // block label per map index, labels canonical

// restricted growth strings of length t, lex order
std::vector<Partition> all_partitions(int t) {
  std::vector<Partition> out;
  Partition cur(t, 0);
  auto rec = [&](auto&& self, int i, int mx) -> void {
    if (i == t) { out.push_back(cur); return; }
    for (int v = 0; v <= mx + 1; ++v) {
      cur[i] = v;
      self(self, i + 1, std::max(mx, v));
    }
  };
  rec(rec, 1, 0);
  if (t == 0) out.push_back({});
  return out;
}

bool refines(const Partition& fine, const Partition& coarse) {
  // same fine-block implies same coarse-block
  std::map<int, int> img;
  for (size_t m = 0; m < fine.size(); ++m) {
    auto it = img.find(fine[m]);
    if (it == img.end()) img.emplace(fine[m], coarse[m]);
    else if (it->second != coarse[m]) return false;
  }
  return true;
}

Partition meet_partition(const Partition& a, const Partition& b) {
  std::map<std::pair<int, int>, int> seen;
  Partition out(a.size());
  for (size_t m = 0; m < a.size(); ++m) {
    auto key = std::make_pair(a[m], b[m]);
    auto it = seen.find(key);
    if (it == seen.end()) it = seen.emplace(key, (int)seen.size()).first;
    out[m] = it->second;
  }
  return out;
}

bool is_discrete(const Partition& p) {
  std::set<int> labels(p.begin(), p.end());
  return labels.size() == p.size();
}

std::vector<ElementId> join_irreducibles(const FiniteUslTop& l) {
  std::vector<ElementId> out;
  for (ElementId x = 0; x < l.size(); ++x) {
    if (x == l.bot()) continue;
    bool reducible = false;
    for (ElementId y = 0; y < l.size() && !reducible; ++y)
      for (ElementId z = 0; z < l.size() && !reducible; ++z)
        reducible = l.lt(y, x) && l.lt(z, x) && l.join(y, z) == x;
    if (!reducible) out.push_back(x);
  }
  return out;
}

}  // namespace

UslTable build_table(const FiniteUslTop& l, const TableCaps& caps) {
  const auto deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(
                            std::chrono::duration<double>(caps.time_budget_seconds));
  auto irr = join_irreducibles(l);
  const int n = l.size();
  long long nodes = 0;

  for (int t = 1; t <= caps.max_maps; ++t) {
    auto parts = all_partitions(t);
    std::vector<const Partition*> pick(irr.size(), nullptr);
    std::vector<Partition> derived(n);
    UslTable found;
    bool done = false;

    auto realize = [&]() {
      // does the derived family satisfy the table axioms?
      for (ElementId x = 0; x < n; ++x) {
        derived[x].assign(t, 0);
        bool first = true;
        for (size_t j = 0; j < irr.size(); ++j)
          if (l.leq(irr[j], x)) {
            derived[x] = first ? *pick[j] : meet_partition(derived[x], *pick[j]);
            first = false;
          }
      }
      if (!is_discrete(derived[l.top()])) return false;
      for (ElementId x = 0; x < n; ++x)
        for (ElementId y = 0; y < n; ++y) {
          if (refines(derived[y], derived[x]) != l.leq(x, y)) return false;
          if (!refines(meet_partition(derived[x], derived[y]), derived[l.join(x, y)]))
            return false;
        }
      return true;
    };

    auto rec = [&](auto&& self, size_t j) -> void {
      if (done) return;
      if (Clock::now() > deadline) throw CapExceeded{"build_table: time budget exhausted"};
      if (j == irr.size()) {
        if (++nodes > caps.max_nodes) throw CapExceeded{"build_table: node budget exhausted"};
        if (!realize()) return;
        found.lattice = l;
        // block labels in least-member order; map 0 lands in block 0 everywhere
        for (int m = 0; m < t; ++m) {
          TableMap row(n);
          for (ElementId x = 0; x < n; ++x) row[x] = derived[x][m];
          found.maps.push_back(std::move(row));
        }
        done = true;
        return;
      }
      for (const auto& p : parts) {
        pick[j] = &p;
        self(self, j + 1);
        if (done) return;
      }
    };
    rec(rec, 0);
    if (done) return found;
  }
  throw CapExceeded{"build_table: map-count budget exhausted"};
}

// ---------------------------------------------------------------------------
// build_rep_prefix: grid construction on the diamond, self-nesting otherwise

namespace {

struct DiamondShape {
  ElementId a, b;  // the two coatoms, in element order
};

std::optional<DiamondShape> as_diamond(const FiniteUslTop& l) {
  if (l.size() != 4) return std::nullopt;
  auto co = l.coatoms();
  if (co.size() != 2) return std::nullopt;
  if (l.leq(co[0], co[1]) || l.leq(co[1], co[0])) return std::nullopt;
  return DiamondShape{co[0], co[1]};
}

// the map for grid cell (i,j): value i at the first coatom, j at the second,
// a cell-unique value at top
TableMap grid_map(const FiniteUslTop& l, const DiamondShape& d, int i, int j) {
  TableMap m(l.size(), 0);
  m[d.a] = i;
  m[d.b] = j;
  m[l.top()] = i * 8 + j;
  return m;
}

void add_cells(UslTable& t, const FiniteUslTop& l, const DiamondShape& d,
               std::set<std::pair<int, int>>& used,
               const std::vector<std::pair<int, int>>& cells) {
  for (auto [i, j] : cells)
    if (used.insert({i, j}).second) t.maps.push_back(grid_map(l, d, i, j));
}

std::vector<std::pair<int, int>> full_grid(int rows, int cols) {
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) cells.emplace_back(i, j);
  return cells;
}

}  // namespace

Result<RepPrefix> build_rep_prefix(const FiniteUslTop& l, int depth, bool with_coding,
                                   const TableCaps& caps) {
  Result<RepPrefix> res;
  if (depth < 0) {
    res.diag = {"BadDepth", "depth must be nonnegative"};
    return res;
  }
  if (with_coding && l.coatoms().size() < 2) {
    res.diag = {"TooFewCoatoms", "coding needs at least two coatoms"};
    return res;
  }

  auto dia = as_diamond(l);
  RepPrefix r;
  r.lattice = l;

  if (dia) {
    std::set<std::pair<int, int>> used;
    UslTable cur{l, {}};
    int rows = with_coding ? 4 : 2, cols = with_coding ? 3 : 2;
    add_cells(cur, l, *dia, used, full_grid(rows, cols));
    r.theta.push_back(cur);
    if (with_coding) {
      CodingApparatus c;
      auto at = [&](int i, int j) { return r.theta[0].find(grid_map(l, *dia, i, j)); };
      c.coding_set = {at(1, 1), at(1, 2), at(2, 1), at(3, 1)};
      c.g[{dia->a, dia->b, 0}] = at(1, 1);
      c.g[{dia->a, dia->b, 1}] = at(1, 2);
      c.g[{dia->b, dia->a, 0}] = at(2, 1);
      c.g[{dia->b, dia->a, 1}] = at(3, 1);
      r.coding = c;
    }
    for (int d = 1; d <= depth; ++d) {
      if (with_coding) {
        // starred stage: one fresh column and one fresh row of escapes
        std::vector<std::pair<int, int>> fresh;
        for (int i = 0; i < rows; ++i) fresh.emplace_back(i, cols);
        for (int j = 0; j < cols; ++j) fresh.emplace_back(rows, j);
        add_cells(cur, l, *dia, used, fresh);
        r.theta_star.push_back(cur);
      }
      rows += 2;
      cols += 2;
      add_cells(cur, l, *dia, used, full_grid(rows, cols));
      r.theta.push_back(cur);
    }
    auto rep = with_coding ? verify_coding_ready(r) : verify_rep_prefix(r);
    if (!rep.pass()) {
      res.diag = {"Unverified", "construction failed re-verification: " + rep.summary()};
      return res;
    }
    res.value = std::move(r);
    return res;
  }

  if (with_coding) {
    // no verified construction is available for this shape at desk scale
    throw CapExceeded{"build_rep_prefix: coding construction only covers the diamond"};
  }
  UslTable t0 = build_table(l, caps);
  r.theta.assign(depth + 1, t0);
  auto rep = verify_rep_prefix(r);
  if (!rep.pass()) {
    res.diag = {"Unverified", "base table is not self-interpolating: " + rep.summary()};
    return res;
  }
  res.value = std::move(r);
  return res;
}

}  // namespace husl
