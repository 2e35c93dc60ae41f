#include "husl/tree.hpp"

#include <algorithm>
#include <map>

namespace husl {

namespace {

// prefix-stable lookup: any legal value indexes the last (largest) stage
const TableMap& map_of(const RepPrefix& rep, int value) { return rep.theta.back().maps[value]; }

Diagnostic qualify_pair(const RepPrefix& rep, ElementId x, ElementId y) {
  const auto& l = rep.lattice;
  if (x == l.top() || y == l.top() || l.join(x, y) != l.top())
    return {"PairDoesNotJoinToTop", "coding pairs must join to top and avoid it", x, y};
  if (!rep.coding) return {"NoCoding", "representation prefix has no coding apparatus"};
  return {};
}


}  // namespace

Diagnostic validate_tree(const UniformTreeSpec& t) {
  if (t.rep.theta.empty()) return {"BadTree", "empty representation prefix"};
  if ((int)t.levels.size() != t.depth) return {"BadTree", "level count differs from depth"};
  auto entry_ok = [&](int pos, int v) {
    return v >= 0 && v < (int)t.rep.stage_at(pos).maps.size();
  };
  for (size_t j = 0; j < t.root.size(); ++j)
    if (!entry_ok((int)j, t.root[j]))
      return {"BadEntry", "root entry outside its positional stage", (int)j};
  int h = (int)t.root.size();
  for (int l = 0; l < t.depth; ++l) {
    const auto& lv = t.levels[l];
    const auto& alphabet = t.input_stage(l);
    if (lv.rho.size() != alphabet.maps.size())
      return {"BadTree", "level " + std::to_string(l) + ": one tail per stage map required"};
    for (size_t j = 0; j < lv.pi.size(); ++j)
      if (!entry_ok(h + (int)j, lv.pi[j]))
        return {"BadEntry", "stem entry outside its positional stage", (int)(h + j)};
    h += (int)lv.pi.size();
    size_t len = lv.rho.front().size();
    for (size_t a = 0; a < lv.rho.size(); ++a) {
      if (lv.rho[a].size() != len)
        return {"BadTree", "level " + std::to_string(l) + ": tail lengths differ"};
      if (len == 0 || lv.rho[a][0] != (int)a)
        return {"BadTree", "level " + std::to_string(l) + ": tail must begin with its own map"};
      for (size_t j = 0; j < len; ++j)
        if (!entry_ok(h + (int)j, lv.rho[a][j]))
          return {"BadEntry", "tail entry outside its positional stage", (int)(h + j)};
    }
    h += (int)len;
  }
  return {};
}

UniformTreeSpec identity_tree(const RepPrefix& rep, int depth) {
  UniformTreeSpec t;
  t.rep = rep;
  t.depth = depth;
  t.levels.resize(depth);
  for (int l = 0; l < depth; ++l) {
    int alpha_count = (int)t.input_stage(l).maps.size();
    for (int a = 0; a < alpha_count; ++a) t.levels[l].rho.push_back({a});
  }
  return t;
}

Result<std::vector<int>> apply(const UniformTreeSpec& t, const std::vector<int>& sigma) {
  Result<std::vector<int>> res;
  if ((int)sigma.size() > t.depth) {
    res.diag = {"DepthExceeded", "string longer than the tree depth"};
    return res;
  }
  std::vector<int> out = t.root;
  for (size_t l = 0; l < sigma.size(); ++l) {
    const auto& lv = t.levels[l];
    if (sigma[l] < 0 || sigma[l] >= (int)lv.rho.size()) {
      res.diag = {"BadEntry", "input entry outside the level alphabet", (int)l};
      return res;
    }
    out.insert(out.end(), lv.pi.begin(), lv.pi.end());
    out.insert(out.end(), lv.rho[sigma[l]].begin(), lv.rho[sigma[l]].end());
  }
  res.value = std::move(out);
  return res;
}

Result<UniformTreeSpec> restrict_tree(const UniformTreeSpec& t, const std::vector<int>& sigma) {
  Result<UniformTreeSpec> res;
  auto root = husl::apply(t, sigma);
  if (!root.ok()) {
    res.diag = root.diag;
    return res;
  }
  UniformTreeSpec s;
  s.rep = t.rep;
  s.depth = t.depth - (int)sigma.size();
  s.root = *root;
  s.levels.assign(t.levels.begin() + sigma.size(), t.levels.end());
  s.stage_offset = t.stage_offset + (int)sigma.size();
  res.value = std::move(s);
  return res;
}

Result<UniformTreeSpec> transfer_tree(const UniformTreeSpec& t, const std::vector<int>& mu) {
  Result<UniformTreeSpec> res;
  if (mu.size() > t.root.size()) {
    res.diag = {"BadTransferLength", "transfer string longer than the root"};
    return res;
  }
  UniformTreeSpec s = t;
  for (size_t j = 0; j < mu.size(); ++j) {
    if (mu[j] < 0 || mu[j] >= (int)t.rep.stage_at((int)j).maps.size()) {
      res.diag = {"BadEntry", "transfer entry outside its positional stage", (int)j};
      return res;
    }
    s.root[j] = mu[j];
  }
  res.value = std::move(s);
  return res;
}

TableReport check_branch_coding_free(const UniformTreeSpec& t) {
  TableReport rep;
  if (!t.rep.coding) {
    rep.failures.push_back({"NoCoding", -1, -1, -1, -1, "no coding set to check against"});
    return rep;
  }
  const auto& c = *t.rep.coding;
  for (int l = 0; l < t.depth; ++l) {
    const auto& lv = t.levels[l];
    for (size_t a = 0; a < lv.rho.size(); ++a) {
      std::vector<int> s = lv.pi;
      s.insert(s.end(), lv.rho[a].begin(), lv.rho[a].end());
      for (size_t j = 0; j < s.size(); ++j)
        if (c.in_c(s[j]) && j != lv.pi.size()) {
          rep.failures.push_back({"BranchCoding", l, (int)j, (int)a, -1,
                                  "coding value away from the fork"});
          if (rep.failures.size() >= 16) return rep;
        }
    }
  }
  return rep;
}

TableReport check_congruence_respecting(const UniformTreeSpec& t) {
  TableReport rep;
  const auto& l = t.rep.lattice;
  for (int lev = 0; lev < t.depth; ++lev) {
    const auto& lv = t.levels[lev];
    for (size_t a = 0; a < lv.rho.size(); ++a)
      for (size_t b = a + 1; b < lv.rho.size(); ++b)
        for (ElementId x = 0; x < l.size(); ++x) {
          if (map_of(t.rep, (int)a)[x] != map_of(t.rep, (int)b)[x]) continue;
          for (size_t j = 0; j < lv.rho[a].size(); ++j)
            if (map_of(t.rep, lv.rho[a][j])[x] != map_of(t.rep, lv.rho[b][j])[x]) {
              rep.failures.push_back({"CongruenceRespecting", x, lev, (int)a, (int)b,
                                      "tails differ mod x at offset " + std::to_string(j)});
              if (rep.failures.size() >= 16) return rep;
              break;
            }
        }
  }
  return rep;
}

Result<int> root_coding_count(const UniformTreeSpec& t, ElementId x, ElementId y) {
  Result<int> res;
  res.diag = qualify_pair(t.rep, x, y);
  if (!res.diag.empty()) return res;
  const auto& c = *t.rep.coding;
  int g0 = c.g.at({x, y, 0}), g1 = c.g.at({x, y, 1});
  int count = 0;
  for (int v : t.root) count += (v == g0 || v == g1) ? 1 : 0;
  res.diag = {};
  res.value = count;
  return res;
}

Result<bool> no_more_root_coding(const UniformTreeSpec& s, const UniformTreeSpec& t) {
  Result<bool> res;
  if (!s.rep.coding || !t.rep.coding) {
    res.diag = {"NoCoding", "both trees need a coding apparatus"};
    return res;
  }
  const auto& l = t.rep.lattice;
  bool ok = true;
  for (ElementId x = 0; x < l.size() && ok; ++x)
    for (ElementId y = 0; y < l.size() && ok; ++y) {
      if (x == l.top() || y == l.top() || l.join(x, y) != l.top()) continue;
      ok = *root_coding_count(s, x, y) == *root_coding_count(t, x, y);
    }
  res.value = ok;
  return res;
}

std::vector<int> x_safe(const RepPrefix& rep, const std::vector<int>& sigma, ElementId x) {
  std::vector<int> out = sigma;
  if (!rep.coding) return out;
  for (int& v : out)
    if (rep.coding->in_c(v)) {
      int esc = escape_map(rep, v, x);
      if (esc >= 0) v = esc;
    }
  return out;
}

Result<std::vector<int>> encode_bits(const UniformTreeSpec& t, ElementId x, ElementId y,
                                     const std::vector<int>& bits) {
  Result<std::vector<int>> res;
  res.diag = qualify_pair(t.rep, x, y);
  if (!res.diag.empty()) return res;
  if ((int)bits.size() > t.depth) {
    res.diag = {"DepthExceeded", "more bits than coding opportunities"};
    return res;
  }
  const auto& c = *t.rep.coding;
  std::vector<int> sigma;
  for (int b : bits) sigma.push_back(c.g.at({x, y, b ? 1 : 0}));
  res.diag = {};
  return husl::apply(t, sigma);
}

Result<std::vector<int>> decode_bits(const RepPrefix& rep, const std::vector<int>& prefix,
                                     ElementId x, ElementId y) {
  Result<std::vector<int>> res;
  res.diag = qualify_pair(rep, x, y);
  if (!res.diag.empty()) return res;
  const auto& c = *rep.coding;
  const TableMap& g0 = map_of(rep, c.g.at({x, y, 0}));
  const TableMap& g1 = map_of(rep, c.g.at({x, y, 1}));
  std::vector<int> bits;
  for (size_t j = 0; j < prefix.size(); ++j) {
    int v = prefix[j];
    if (v < 0 || v >= (int)rep.stage_at((int)j).maps.size()) {
      res.diag = {"BadEntry", "prefix entry outside its positional stage", (int)j};
      return res;
    }
    const TableMap& m = map_of(rep, v);
    if (m[x] != g0[x]) continue;
    if (m[y] == g0[y]) bits.push_back(0);
    else if (m[y] == g1[y]) bits.push_back(1);
  }
  res.diag = {};
  res.value = std::move(bits);
  return res;
}

namespace {

void enumerate_strings(const UniformTreeSpec& t, int length,
                       const std::function<void(const std::vector<int>&)>& emit) {
  std::vector<int> cur;
  auto rec = [&](auto&& self, int l) -> void {
    if (l == length) { emit(cur); return; }
    int alpha_count = (int)t.input_stage(l).maps.size();
    for (int a = 0; a < alpha_count; ++a) {
      cur.push_back(a);
      self(self, l + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
}

}  // namespace

std::vector<Split> find_splits(const UniformTreeSpec& t, const DecisionTable& q, ElementId,
                               ElementId y, int depth, size_t limit) {
  std::vector<Split> out;
  depth = std::min(depth, t.depth);
  for (int len = 1; len <= depth && out.size() < limit; ++len) {
    // bucket strings by their values mod y
    std::map<std::vector<int>, std::vector<std::vector<int>>> classes;
    enumerate_strings(t, len, [&](const std::vector<int>& s) {
      std::vector<int> sig(len);
      for (int l = 0; l < len; ++l) sig[l] = map_of(t.rep, s[l])[y];
      classes[sig].push_back(s);
    });
    for (const auto& [sig, members] : classes)
      for (size_t i = 0; i < members.size() && out.size() < limit; ++i)
        for (size_t j = i + 1; j < members.size() && out.size() < limit; ++j)
          for (int n = 1; n <= len; ++n) {
            std::vector<int> p1(members[i].begin(), members[i].begin() + n);
            std::vector<int> p2(members[j].begin(), members[j].begin() + n);
            if (q(n, p1) != q(n, p2)) {
              out.push_back({members[i], members[j], n});
              break;
            }
          }
  }
  return out;
}

std::vector<ElementId> sp_set(const UniformTreeSpec& t, const DecisionTable& q, ElementId x,
                              const std::vector<int>& rho_prefix, int depth) {
  std::vector<ElementId> out;
  auto sub = restrict_tree(t, rho_prefix);
  if (!sub.ok()) return out;
  for (ElementId y = 0; y < t.rep.lattice.size(); ++y)
    if (find_splits(*sub, q, x, y, depth, 1).empty()) out.push_back(y);
  return out;
}

}  // namespace husl
