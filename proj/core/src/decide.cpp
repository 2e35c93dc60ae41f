#include "husl/decide.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <mutex>
#include <set>

#include "husl/enumerate.hpp"
#include "husl/extension.hpp"

namespace husl {

namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point end;
  explicit Deadline(double seconds) : end(Clock::now() + std::chrono::duration_cast<Clock::duration>(
                                              std::chrono::duration<double>(seconds))) {}
  void check(const char* where) const {
    if (Clock::now() > end) throw CapExceeded{std::string(where) + ": time budget exhausted"};
  }
};

std::vector<ElementId> min_under_automorphisms(const std::vector<ElementId>& assignment,
                                               const std::vector<std::vector<ElementId>>& auts) {
  std::vector<ElementId> best = assignment;
  std::vector<ElementId> cur(assignment.size());
  for (const auto& phi : auts) {
    for (size_t i = 0; i < assignment.size(); ++i) cur[i] = phi[assignment[i]];
    if (cur < best) best = cur;
  }
  return best;
}

}  // namespace

std::vector<WitnessStructure> enumerate_witness_structures(int m, const RunCaps& caps) {
  if (m > caps.max_exists)
    throw CapExceeded{"enumerate_witness_structures: block size exceeds cap"};
  const int max_size = (1 << m) + 1;
  if (max_size > caps.max_witness_size)
    throw CapExceeded{"enumerate_witness_structures: witness size bound exceeds cap"};
  Deadline dl(caps.time_budget_seconds);

  std::vector<WitnessStructure> out;
  for (const auto& u : enumerate_usl_top_cached(max_size)) {
    dl.check("enumerate_witness_structures");
    auto auts = automorphisms(u);
    std::vector<ElementId> a(m, 0);
    for (bool done = m == 0 ? false : false; !done;) {
      bool generates = generated_substructure(u, a).small.size() == u.size();
      if (generates && a == min_under_automorphisms(a, auts)) out.push_back({u, a});
      if (m == 0) break;
      int i = m - 1;
      while (i >= 0 && a[i] == u.size() - 1) a[i--] = 0;
      if (i < 0) done = true;
      else ++a[i];
    }
  }
  return out;
}

namespace {

// Join-congruence closure of a partition after merging extra pairs; returns
// false (prune) if two distinct embedded base elements fall together.
bool close_congruence(const FiniteUslTop& f, std::vector<int>& cls,
                      const std::vector<ElementId>& embedded, ElementId a, ElementId b) {
  std::vector<std::pair<ElementId, ElementId>> work{{a, b}};
  auto merge = [&](ElementId p, ElementId q) {
    int cp = cls[p], cq = cls[q];
    if (cp == cq) return false;
    if (cq < cp) std::swap(cp, cq);
    for (auto& c : cls)
      if (c == cq) c = cp;
    return true;
  };
  while (!work.empty()) {
    auto [p, q] = work.back();
    work.pop_back();
    if (!merge(p, q)) continue;
    for (ElementId c = 0; c < f.size(); ++c) {
      ElementId pj = f.join(p, c), qj = f.join(q, c);
      if (cls[pj] != cls[qj]) work.emplace_back(pj, qj);
    }
  }
  for (size_t i = 0; i < embedded.size(); ++i)
    for (size_t j = i + 1; j < embedded.size(); ++j)
      if (cls[embedded[i]] == cls[embedded[j]]) return false;
  return true;
}

std::vector<int> canonical_partition(std::vector<int> cls) {
  std::map<int, int> seen;
  for (auto& c : cls) {
    auto it = seen.find(c);
    if (it == seen.end()) it = seen.emplace(c, (int)seen.size()).first;
    c = it->second;
  }
  return cls;
}

// Isomorphism v -> v2 fixing the inclusion image pointwise and carrying
// assignment to assignment2.
bool equivalent_extensions(const AeeExtension& e1, const AeeExtension& e2) {
  if (e1.v.size() != e2.v.size()) return false;
  int n = e1.v.size();
  std::vector<ElementId> map(n, -1);
  std::vector<bool> used(n, false);
  auto pin = [&](ElementId from, ElementId to) {
    if (map[from] >= 0) return map[from] == to;
    if (used[to]) return false;
    map[from] = to;
    used[to] = true;
    return true;
  };
  for (size_t i = 0; i < e1.inclusion.size(); ++i)
    if (!pin(e1.inclusion[i], e2.inclusion[i])) return false;
  for (size_t i = 0; i < e1.assignment.size(); ++i)
    if (!pin(e1.assignment[i], e2.assignment[i])) return false;
  if (!pin(e1.v.bot(), e2.v.bot()) || !pin(e1.v.top(), e2.v.top())) return false;

  auto rec = [&](auto&& self, ElementId x) -> bool {
    while (x < n && map[x] >= 0) ++x;
    if (x == n) return true;
    for (ElementId t = 0; t < n; ++t) {
      if (used[t]) continue;
      bool okc = true;
      for (ElementId y = 0; y < n && okc; ++y) {
        if (map[y] < 0) continue;
        if (e1.v.leq(x, y) != e2.v.leq(t, map[y]) || e1.v.leq(y, x) != e2.v.leq(map[y], t))
          okc = false;
      }
      if (!okc) continue;
      map[x] = t;
      used[t] = true;
      if (self(self, x + 1)) return true;
      map[x] = -1;
      used[t] = false;
    }
    return false;
  };
  // consistency of the pinned part
  for (ElementId x = 0; x < n; ++x)
    for (ElementId y = 0; y < n; ++y) {
      if (map[x] < 0 || map[y] < 0) continue;
      if (e1.v.leq(x, y) != e2.v.leq(map[x], map[y])) return false;
    }
  return rec(rec, 0);
}

}  // namespace

std::vector<AeeExtension> enumerate_aee_extensions(const FiniteUslTop& u, int k,
                                                   const RunCaps& caps) {
  if (k > caps.max_forall) throw CapExceeded{"enumerate_aee_extensions: block size exceeds cap"};
  Deadline dl(caps.time_budget_seconds);

  std::set<std::string> taken(u.names().begin(), u.names().end());
  std::vector<std::string> gens;
  for (int i = 0; i < k; ++i) {
    std::string nm = "y" + std::to_string(i);
    while (taken.count(nm)) nm += "'";
    taken.insert(nm);
    gens.push_back(nm);
  }
  auto fe = free_extend(u, gens);
  const auto& f = fe.result;
  if (f.size() > caps.max_extension_size)
    throw CapExceeded{"enumerate_aee_extensions: free extension exceeds size cap"};

  // BFS over join-congruences with the base kept injective
  std::vector<int> delta(f.size());
  for (int i = 0; i < f.size(); ++i) delta[i] = i;
  std::set<std::vector<int>> visited;
  std::vector<std::vector<int>> frontier{canonical_partition(delta)}, all;
  visited.insert(frontier.front());
  long long states = 1;
  while (!frontier.empty()) {
    dl.check("enumerate_aee_extensions");
    std::vector<std::vector<int>> next;
    for (const auto& cls : frontier) {
      all.push_back(cls);
      for (ElementId a = 0; a < f.size(); ++a)
        for (ElementId b = a + 1; b < f.size(); ++b) {
          if (cls[a] == cls[b]) continue;
          auto succ = cls;
          if (!close_congruence(f, succ, fe.embedding, a, b)) continue;
          succ = canonical_partition(std::move(succ));
          if (visited.insert(succ).second) {
            if (++states > caps.max_congruence_states)
              throw CapExceeded{"enumerate_aee_extensions: congruence budget exhausted"};
            next.push_back(std::move(succ));
          }
        }
    }
    frontier = std::move(next);
  }

  std::vector<AeeExtension> out;
  for (const auto& cls : all) {
    FiniteUslTop v = quotient_by_congruence(f, cls);
    // class index lookup, mirroring quotient_by_congruence's ordering
    std::map<int, ElementId> least;
    for (ElementId e = 0; e < f.size(); ++e)
      if (!least.count(cls[e])) least[cls[e]] = e;
    std::vector<ElementId> reps;
    for (auto& [c, r] : least) reps.push_back(r);
    std::sort(reps.begin(), reps.end());
    std::map<int, ElementId> pos;
    for (int i = 0; i < (int)reps.size(); ++i) pos[cls[reps[i]]] = i;

    AeeExtension ext;
    ext.v = std::move(v);
    ext.inclusion.resize(u.size());
    for (ElementId x = 0; x < u.size(); ++x) ext.inclusion[x] = pos[cls[fe.embedding[x]]];
    ext.assignment.resize(k);
    for (int i = 0; i < k; ++i) ext.assignment[i] = pos[cls[fe.generator_element(i)]];

    SubstructureWitness sw{u, ext.v, ext.inclusion};
    if (!is_almost_end_extension(sw)) continue;
    bool dup = false;
    for (const auto& prev : out)
      if (equivalent_extensions(prev, ext)) { dup = true; break; }
    if (!dup) out.push_back(std::move(ext));
  }
  return out;
}

const std::vector<AeeExtension>& enumerate_aee_extensions_cached(const FiniteUslTop& u, int k,
                                                                 const RunCaps& caps) {
  static std::mutex mu;
  static std::map<std::pair<std::vector<std::uint64_t>, int>, std::vector<AeeExtension>> cache;
  auto key = std::make_pair(canonical_key(u), k);
  {
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto exts = enumerate_aee_extensions(u, k, caps);
  std::scoped_lock lock(mu);
  return cache.emplace(std::move(key), std::move(exts)).first->second;
}

bool decide_question1(const FiniteUslTop& u, const std::vector<SubstructureWitness>& candidates) {
  for (const auto& c : candidates) {
    if (!c.small.same_order(u)) continue;
    if (is_almost_end_extension(c)) return true;
  }
  return false;
}

namespace {

Env combined_env(const std::vector<std::string>& xvars, const std::vector<ElementId>& xassign,
                 const std::vector<ElementId>& inclusion, const std::vector<std::string>& yvars,
                 const std::vector<ElementId>& yassign) {
  Env env;
  for (size_t i = 0; i < xvars.size(); ++i) env[xvars[i]] = inclusion[xassign[i]];
  for (size_t i = 0; i < yvars.size(); ++i) env[yvars[i]] = yassign[i];
  return env;
}

}  // namespace

Sigma2Certificate decide_sigma2(const PrenexSigma2& s, const RunCaps& caps) {
  Sigma2Certificate cert;
  cert.matrix = s.matrix;
  cert.existential_vars = s.existential_vars;
  cert.universal_vars = s.universal_vars;
  const int m = s.existential_vars.size();
  const int k = s.universal_vars.size();
  try {
    auto witnesses = enumerate_witness_structures(m, caps);
    for (const auto& w : witnesses) {
      const auto& exts = enumerate_aee_extensions_cached(w.u, k, caps);
      const AeeExtension* counter = nullptr;
      for (const auto& e : exts) {
        auto env = combined_env(s.existential_vars, w.assignment, e.inclusion, s.universal_vars,
                                e.assignment);
        if (!eval_qf(e.v, env, s.matrix)) { counter = &e; break; }
      }
      CandidateRecord rec;
      rec.u = w.u;
      for (int i = 0; i < m; ++i) rec.x_env[s.existential_vars[i]] = w.assignment[i];
      if (!counter) {
        cert.verdict = Verdict::True;
        cert.witness = std::move(rec);
        cert.refutations.clear();
        return cert;
      }
      ModelInstance mi;
      mi.structure = counter->v;
      mi.env = combined_env(s.existential_vars, w.assignment, counter->inclusion,
                            s.universal_vars, counter->assignment);
      mi.matrix_value = false;
      rec.extension = std::move(mi);
      rec.inclusion = counter->inclusion;
      cert.refutations.push_back(std::move(rec));
    }
    cert.verdict = Verdict::False;
  } catch (const CapExceeded& ce) {
    cert.verdict = Verdict::Unknown;
    cert.note = ce.what;
  }
  return cert;
}

Pi2Certificate decide_pi2(const PrenexPi2& s, const RunCaps& caps) {
  Pi2Certificate cert;
  cert.matrix = s.matrix;
  cert.universal_vars = s.universal_vars;
  cert.existential_vars = s.existential_vars;
  const int m = s.universal_vars.size();
  const int k = s.existential_vars.size();
  RunCaps local = caps;
  // the universal block drives the witness search here
  local.max_exists = caps.max_forall >= m ? m : caps.max_forall;
  local.max_forall = caps.max_exists >= k ? k : caps.max_exists;
  try {
    if (m > caps.max_forall) throw CapExceeded{"decide_pi2: universal block exceeds cap"};
    if (k > caps.max_exists) throw CapExceeded{"decide_pi2: existential block exceeds cap"};
    auto candidates = enumerate_witness_structures(m, local);
    for (const auto& w : candidates) {
      const auto& exts = enumerate_aee_extensions_cached(w.u, k, local);
      const AeeExtension* good = nullptr;
      for (const auto& e : exts) {
        auto env = combined_env(s.universal_vars, w.assignment, e.inclusion, s.existential_vars,
                                e.assignment);
        if (eval_qf(e.v, env, s.matrix)) { good = &e; break; }
      }
      CandidateRecord rec;
      rec.u = w.u;
      for (int i = 0; i < m; ++i) rec.x_env[s.universal_vars[i]] = w.assignment[i];
      if (!good) {
        cert.verdict = Verdict::False;
        cert.refutation = std::move(rec);
        cert.realizations.clear();
        return cert;
      }
      ModelInstance mi;
      mi.structure = good->v;
      mi.env = combined_env(s.universal_vars, w.assignment, good->inclusion, s.existential_vars,
                            good->assignment);
      mi.matrix_value = true;
      rec.extension = std::move(mi);
      rec.inclusion = good->inclusion;
      cert.realizations.push_back(std::move(rec));
    }
    cert.verdict = Verdict::True;
  } catch (const CapExceeded& ce) {
    cert.verdict = Verdict::Unknown;
    cert.note = ce.what;
  }
  return cert;
}

bool check_certificate(const Sigma2Certificate& c) {
  if (c.verdict == Verdict::True && c.witness) {
    // a witness certificate asserts nothing about individual extensions
    return true;
  }
  for (const auto& r : c.refutations) {
    if (!r.extension) return false;
    if (eval_qf(r.extension->structure, r.extension->env, c.matrix) != r.extension->matrix_value)
      return false;
  }
  return true;
}

bool check_certificate(const Pi2Certificate& c) {
  for (const auto& r : c.realizations) {
    if (!r.extension) return false;
    if (eval_qf(r.extension->structure, r.extension->env, c.matrix) != r.extension->matrix_value)
      return false;
  }
  return true;
}

}  // namespace husl
