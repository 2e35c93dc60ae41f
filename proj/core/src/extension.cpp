#include "husl/extension.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <set>

namespace husl {

ElementId FreeExtension::element_of(ElementId base_elem, std::uint32_t gen_mask) const {
  for (ElementId e = 0; e < result.size(); ++e)
    if (e != result.top() && decode[e] == std::make_pair(base_elem, gen_mask)) return e;
  return -1;
}

ElementId FreeExtension::generator_element(int i) const {
  return element_of(base.bot(), 1u << i);
}

FreeExtension free_extend(const FiniteUslTop& u, const std::vector<std::string>& gen_names) {
  const int nx = gen_names.size();
  const std::uint32_t nmask = 1u << nx;
  FreeExtension fe;
  fe.base = u;
  fe.generators = gen_names;

  // elements: (x, S) for x != top, S subset of X, ordered by (S, x); top last
  std::vector<std::pair<ElementId, std::uint32_t>> elems;
  for (std::uint32_t s = 0; s < nmask; ++s)
    for (ElementId x = 0; x < u.size(); ++x)
      if (x != u.top() || u.size() == 1) {
        if (x == u.top()) continue;
        elems.emplace_back(x, s);
      }
  // degenerate one-element base: only top exists
  const int n = elems.size() + 1;
  const ElementId topid = n - 1;

  auto index_of = [&](ElementId x, std::uint32_t s) -> ElementId {
    for (int i = 0; i < (int)elems.size(); ++i)
      if (elems[i] == std::make_pair(x, s)) return i;
    return topid;
  };

  std::vector<std::uint64_t> up(n, 0);
  for (int i = 0; i < n; ++i) up[i] |= 1ull << topid;
  up[topid] = 1ull << topid;
  for (int i = 0; i < (int)elems.size(); ++i)
    for (int j = 0; j < (int)elems.size(); ++j) {
      auto [x1, s1] = elems[i];
      auto [x2, s2] = elems[j];
      if (u.leq(x1, x2) && (s1 & ~s2) == 0) up[i] |= 1ull << j;
    }

  std::vector<std::string> names(n);
  for (int i = 0; i < (int)elems.size(); ++i) {
    auto [x, s] = elems[i];
    std::string nm = "(" + u.name(x) + ";";
    bool first = true;
    for (int g = 0; g < nx; ++g)
      if ((s >> g) & 1u) {
        nm += (first ? "" : ",") + gen_names[g];
        first = false;
      }
    nm += ")";
    names[i] = nm;
  }
  names[topid] = u.size() == 1 ? "(" + u.name(u.top()) + ";)" : u.name(u.top());

  ElementId botid = index_of(u.bot(), 0);
  if (u.size() == 1) botid = topid;
  auto r = FiniteUslTop::validate(n, up, botid, topid, std::move(names));
  assert(r.ok());
  fe.result = std::move(*r);

  fe.decode.assign(n, {u.top(), 0});
  for (int i = 0; i < (int)elems.size(); ++i) fe.decode[i] = elems[i];

  fe.embedding.assign(u.size(), -1);
  for (ElementId x = 0; x < u.size(); ++x)
    fe.embedding[x] = (x == u.top()) ? topid : index_of(x, 0);
  return fe;
}

std::optional<ElementId> is_simple_extension(const SubstructureWitness& w) {
  for (ElementId g = 0; g < w.big.size(); ++g) {
    auto seed = w.inclusion;
    seed.push_back(g);
    if (generated_substructure(w.big, seed).small.size() == w.big.size()) return g;
  }
  return std::nullopt;
}

EmbeddingReport verify_embedding(const std::vector<ElementId>& f, const FiniteUslTop& source,
                                 const FiniteUslTop& target) {
  EmbeddingReport rep;
  std::set<ElementId> image;
  for (ElementId x = 0; x < source.size(); ++x) {
    if (!image.insert(f[x]).second) {
      rep.injective = false;
      rep.detail = "collision at " + source.name(x);
    }
  }
  if (f[source.bot()] != target.bot()) rep.bot_preserved = false;
  if (f[source.top()] != target.top()) rep.top_preserved = false;
  for (ElementId x = 0; x < source.size(); ++x)
    for (ElementId y = 0; y < source.size(); ++y) {
      if (f[source.join(x, y)] != target.join(f[x], f[y])) rep.join_preserved = false;
      if (source.leq(x, y) != target.leq(f[x], f[y])) rep.order_preserved = false;
    }
  return rep;
}

bool is_join_congruence(const FiniteUslTop& u, const std::vector<int>& class_of) {
  if ((int)class_of.size() != u.size()) return false;
  for (ElementId a = 0; a < u.size(); ++a)
    for (ElementId b = 0; b < u.size(); ++b) {
      if (class_of[a] != class_of[b]) continue;
      for (ElementId c = 0; c < u.size(); ++c)
        if (class_of[u.join(a, c)] != class_of[u.join(b, c)]) return false;
    }
  return true;
}

FiniteUslTop quotient_by_congruence(const FiniteUslTop& u, const std::vector<int>& class_of) {
  // class representative: least member
  std::map<int, ElementId> rep;
  for (ElementId x = 0; x < u.size(); ++x)
    if (!rep.count(class_of[x])) rep[class_of[x]] = x;
  std::vector<ElementId> reps;
  for (auto& [c, r] : rep) reps.push_back(r);
  std::sort(reps.begin(), reps.end());
  const int n = reps.size();
  std::vector<int> idx_of_class(u.size(), -1);
  for (int i = 0; i < n; ++i) idx_of_class[class_of[reps[i]]] = i;

  auto qidx = [&](ElementId x) { return idx_of_class[class_of[x]]; };

  // order induced by the quotient join table
  std::vector<std::uint64_t> up(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (qidx(u.join(reps[i], reps[j])) == j) up[i] |= 1ull << j;

  std::vector<std::string> names(n);
  for (int i = 0; i < n; ++i) names[i] = "[" + u.name(reps[i]) + "]";
  auto r = FiniteUslTop::validate(n, up, qidx(u.bot()), qidx(u.top()), std::move(names));
  assert(r.ok());
  return *r;
}

Result<DecompositionWitness> decompose(const SubstructureWitness& pair) {
  Result<DecompositionWitness> res;
  auto sub = check_substructure(pair);
  if (!sub.empty()) {
    res.diag = sub;
    return res;
  }
  if (!is_almost_end_extension(pair)) {
    res.diag = {"NotAlmostEndExtension", "the input pair is not an almost-end-extension", -1, -1, {}};
    return res;
  }

  DecompositionWitness w;
  w.u = pair.small;
  w.v = pair.big;
  w.inclusion = pair.inclusion;

  // enumerate V \ U in the input structure's element order
  std::vector<ElementId> outside;
  {
    std::set<ElementId> image(pair.inclusion.begin(), pair.inclusion.end());
    for (ElementId v = 0; v < w.v.size(); ++v)
      if (!image.count(v)) outside.push_back(v);
  }
  std::set<std::string> taken(w.u.names().begin(), w.u.names().end());
  for (size_t i = 0; i < outside.size(); ++i) {
    std::string nm = "a" + std::to_string(i + 1);
    while (taken.count(nm)) nm += "'";
    taken.insert(nm);
    w.fresh_names.push_back(nm);
  }

  w.u1 = free_extend(w.u, w.fresh_names);
  const auto& u1 = w.u1.result;

  // h((x, A1)) = incl(x) joined with all v_i named in A1; h(top) = top
  w.h.assign(u1.size(), -1);
  for (ElementId e = 0; e < u1.size(); ++e) {
    if (e == u1.top()) {
      w.h[e] = w.v.top();
      continue;
    }
    auto [x, mask] = w.u1.decode[e];
    ElementId acc = pair.inclusion[x];
    for (size_t i = 0; i < outside.size(); ++i)
      if ((mask >> i) & 1u) acc = w.v.join(acc, outside[i]);
    w.h[e] = acc;
  }

  w.u2prime = free_extend(u1, {"b"});
  const auto& u2p = w.u2prime.result;

  // the congruence of the proof: nontrivial only among (x, {b}) elements and top
  {
    std::vector<int> cls(u2p.size());
    std::iota(cls.begin(), cls.end(), 0);
    auto unify = [&](int a, int b) {
      int ca = cls[a], cb = cls[b];
      if (ca == cb) return;
      for (auto& c : cls)
        if (c == cb) c = ca;
    };
    for (ElementId e0 = 0; e0 < u2p.size(); ++e0)
      for (ElementId e1 = e0 + 1; e1 < u2p.size(); ++e1) {
        bool b0 = e0 != u2p.top() && w.u2prime.decode[e0].second != 0;
        bool b1 = e1 != u2p.top() && w.u2prime.decode[e1].second != 0;
        if (b0 && b1) {
          if (w.h[w.u2prime.decode[e0].first] == w.h[w.u2prime.decode[e1].first]) unify(e0, e1);
        } else if (e0 == u2p.top() && b1) {
          if (w.h[w.u2prime.decode[e1].first] == w.v.top()) unify(e0, e1);
        } else if (e1 == u2p.top() && b0) {
          if (w.h[w.u2prime.decode[e0].first] == w.v.top()) unify(e0, e1);
        }
      }
    w.congruence = std::move(cls);
  }

  if (!is_join_congruence(u2p, w.congruence)) {
    res.diag = {"CongruenceFailure", "the proof's relation is not a join-congruence here", -1, -1, {}};
    return res;
  }
  w.u2 = quotient_by_congruence(u2p, w.congruence);

  // index of a class in u2 (classes are named by least member, sorted)
  std::vector<ElementId> class_index(u2p.size(), -1);
  {
    std::map<int, ElementId> least;
    for (ElementId e = 0; e < u2p.size(); ++e)
      if (!least.count(w.congruence[e])) least[w.congruence[e]] = e;
    std::vector<ElementId> reps;
    for (auto& [c, r] : least) reps.push_back(r);
    std::sort(reps.begin(), reps.end());
    std::map<int, ElementId> pos;
    for (int i = 0; i < (int)reps.size(); ++i) pos[w.congruence[reps[i]]] = i;
    for (ElementId e = 0; e < u2p.size(); ++e) class_index[e] = pos[w.congruence[e]];
  }

  w.u1_into_u2.assign(u1.size(), -1);
  for (ElementId x = 0; x < u1.size(); ++x) w.u1_into_u2[x] = class_index[w.u2prime.embedding[x]];

  // f: top -> [top]; u-element -> [((u,0),0)]; new v -> [(g(v), {b})]
  w.f.assign(w.v.size(), -1);
  w.f[w.v.top()] = class_index[u2p.top()];
  for (ElementId x = 0; x < w.u.size(); ++x)
    if (pair.inclusion[x] != w.v.top())
      w.f[pair.inclusion[x]] = class_index[w.u2prime.embedding[w.u1.embedding[x]]];
  for (size_t i = 0; i < outside.size(); ++i) {
    ElementId gi = w.u1.generator_element(i);       // (bot, {a_i}) in u1
    ElementId gb = w.u2prime.element_of(gi, 1u);    // (g(v), {b}) in u2'
    w.f[outside[i]] = class_index[gb];
  }

  // ---- verification of all witness invariants ----
  auto bail = [&](const std::string& code, const std::string& msg) {
    res.diag = {code, msg, -1, -1, {}};
    return res;
  };

  // h is a homomorphism fixing u, with h(g(v)) = v
  for (ElementId x = 0; x < u1.size(); ++x)
    for (ElementId y = 0; y < u1.size(); ++y)
      if (w.h[u1.join(x, y)] != w.v.join(w.h[x], w.h[y]))
        return bail("HNotHomomorphism", "h fails to preserve a join");
  for (ElementId x = 0; x < w.u.size(); ++x)
    if (w.h[w.u1.embedding[x]] != pair.inclusion[x])
      return bail("HNotIdentity", "h does not fix the base");
  for (size_t i = 0; i < outside.size(); ++i)
    if (w.h[w.u1.generator_element(i)] != outside[i])
      return bail("HNotSection", "h(g(v)) != v");

  // u1 -> u2 is an almost-initial-segment embedding, and u2 is simple over it
  {
    SubstructureWitness sw{u1, w.u2, w.u1_into_u2};
    auto d = check_substructure(sw);
    if (!d.empty()) return bail("U1NotSubstructure", d.message);
    if (!is_almost_end_extension(sw)) return bail("U1NotAIS", "u1 is not an almost-initial-segment of u2");
    ElementId bclass = class_index[w.u2prime.element_of(u1.bot(), 1u)];
    auto seed = w.u1_into_u2;
    seed.push_back(bclass);
    if (generated_substructure(w.u2, seed).small.size() != w.u2.size())
      return bail("U2NotSimple", "u2 is not generated over u1 by the class of (bot,b)");
  }

  // f is an embedding extending u -> u2
  auto er = verify_embedding(w.f, w.v, w.u2);
  if (!er.ok()) return bail("FNotEmbedding", er.detail.empty() ? "f fails an embedding clause" : er.detail);
  for (ElementId x = 0; x < w.u.size(); ++x)
    if (w.f[pair.inclusion[x]] != w.u1_into_u2[w.u1.embedding[x]])
      return bail("FNotExtension", "f does not extend the natural map of u into u2");

  res.value = std::move(w);
  return res;
}

}  // namespace husl
