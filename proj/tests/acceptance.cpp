// Acceptance gate: one line per criterion, nonzero exit when any fails.
// Each check is phrased against the definitional layer, not the builders
// under test.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "husl/decide.hpp"
#include "husl/enumerate.hpp"
#include "husl/extension.hpp"
#include "husl/sentence.hpp"
#include "husl/table.hpp"
#include "husl/tree.hpp"

using namespace husl;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, const char* what, bool ok) {
  std::printf("criterion %2d: %-4s  %s\n", n, ok ? "pass" : "FAIL", what);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// --- shared random formula machinery (seeded, deterministic) -------------

TermPtr random_term(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  switch (rng() % (depth > 0 ? 4 : 3)) {
    case 0: return Term::zero();
    case 1: return Term::one();
    case 2: return Term::mkvar(vars[rng() % vars.size()]);
    default:
      return Term::mkjoin(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1));
  }
}

FormulaPtr random_matrix(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  switch (rng() % (depth > 0 ? 6 : 2)) {
    case 0: return Formula::leq(random_term(rng, vars, 1), random_term(rng, vars, 1));
    case 1: return Formula::eq(random_term(rng, vars, 1), random_term(rng, vars, 1));
    case 2: return Formula::mknot(random_matrix(rng, vars, depth - 1));
    case 3:
      return Formula::mkand(random_matrix(rng, vars, depth - 1),
                            random_matrix(rng, vars, depth - 1));
    case 4:
      return Formula::mkor(random_matrix(rng, vars, depth - 1),
                           random_matrix(rng, vars, depth - 1));
    default:
      return Formula::implies(random_matrix(rng, vars, depth - 1),
                              random_matrix(rng, vars, depth - 1));
  }
}

bool sat_oracle(const std::vector<std::string>& vars, const FormulaPtr& matrix, int bound) {
  for (const auto& u : enumerate_usl_top_cached(bound)) {
    std::vector<ElementId> asg(vars.size(), 0);
    while (true) {
      Env env;
      for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = asg[i];
      if (eval_qf(u, env, matrix)) return true;
      size_t i = 0;
      while (i < vars.size() && ++asg[i] == u.size()) asg[i++] = 0;
      if (i == vars.size()) break;
    }
  }
  return false;
}

// All join-closed subsets of big containing bot and top, as witnesses.
std::vector<SubstructureWitness> all_substructures(const FiniteUslTop& big) {
  std::vector<SubstructureWitness> out;
  int n = big.size();
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (!((mask >> big.bot()) & 1) || !((mask >> big.top()) & 1)) continue;
    std::vector<ElementId> members;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) members.push_back(i);
    bool closed = true;
    for (ElementId a : members)
      for (ElementId b : members)
        if (!((mask >> big.join(a, b)) & 1)) closed = false;
    if (closed) out.push_back(generated_substructure(big, members));
  }
  return out;
}

// Definition-literal: some new element strictly below a non-top image
// element disqualifies the pair.
bool literal_aee(const SubstructureWitness& w) {
  std::vector<bool> image(w.big.size(), false);
  for (ElementId e : w.inclusion) image[e] = true;
  for (ElementId v = 0; v < w.big.size(); ++v) {
    if (image[v]) continue;
    for (ElementId u = 0; u < w.small.size(); ++u) {
      ElementId img = w.inclusion[u];
      if (img != w.big.top() && w.big.lt(v, img)) return false;
    }
  }
  return true;
}

// --- criteria ------------------------------------------------------------

void criterion_1() {
  struct Case {
    const char* text;
    bool sigma;
    Verdict want;
  };
  const Case cases[] = {
      {"exists x . x = x", true, Verdict::True},
      {"exists x y . x + y = 1 & !(x = 1) & !(y = 1)", true, Verdict::True},
      {"exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))", true, Verdict::True},
      {"exists x . !(x = 1) & forall y . y <= x", true, Verdict::False},
      {"forall x . x <= 1", false, Verdict::True},
      {"forall x . exists y . !(y <= x) & !(x <= y)", false, Verdict::False},
      {"forall x . exists y . (x <= y & !(x = y)) \\/ x = 1", false, Verdict::True},
  };
  bool ok = true;
  for (const auto& c : cases) {
    auto t0 = Clock::now();
    auto s = parse_sentence(c.text);
    if (!s.ok()) {
      ok = false;
      continue;
    }
    Verdict got;
    if (c.sigma) {
      auto p = prenex_sigma2(*s);
      got = p.ok() ? decide_sigma2(*p).verdict : Verdict::Unknown;
    } else {
      auto p = prenex_pi2(*s);
      got = p.ok() ? decide_pi2(*p).verdict : Verdict::Unknown;
    }
    if (got != c.want || seconds_since(t0) >= 60.0) ok = false;
  }
  report(1, "curated sentence suite, stated verdicts within 60 s", ok);
}

void criterion_2() {
  std::mt19937 rng(160);
  int checked = 0;
  bool ok = true;
  RunCaps caps;
  caps.max_exists = 3;
  caps.max_forall = 3;
  for (int trial = 0; trial < 60; ++trial) {
    int m = 1 + (int)(rng() % 3);
    std::vector<std::string> vars(m);
    for (int i = 0; i < m; ++i) vars[i] = std::string(1, char('x' + i));
    auto matrix = random_matrix(rng, vars, 3);
    bool sat = sat_oracle(vars, matrix, (1 << m) + 1);

    PrenexSigma2 s{vars, {}, matrix};
    auto cs = decide_sigma2(s, caps);
    if (cs.verdict == Verdict::Unknown || (cs.verdict == Verdict::True) != sat) ok = false;
    ++checked;

    PrenexPi2 p{vars, {}, matrix};
    bool valid = !sat_oracle(vars, Formula::mknot(matrix), (1 << m) + 1);
    auto cp = decide_pi2(p, caps);
    if (cp.verdict == Verdict::Unknown || (cp.verdict == Verdict::True) != valid) ok = false;
    ++checked;
  }
  report(2, "one-block oracle agreement on 120 sentences", ok && checked >= 100);
}

void criterion_3() {
  std::mt19937 rng(170);
  int checked = 0;
  bool ok = true;
  for (int trial = 0; trial < 110; ++trial) {
    std::vector<std::string> evars = {"x"};
    if (rng() % 4 == 0) evars.push_back("w");
    std::vector<std::string> uvars = {"y"};
    if (rng() % 3 == 0) uvars.push_back("z");
    std::vector<std::string> all = evars;
    all.insert(all.end(), uvars.begin(), uvars.end());
    auto matrix = random_matrix(rng, all, 3);
    auto sentence = Formula::exists(evars, Formula::forall(uvars, matrix));

    auto s2 = prenex_sigma2(sentence);
    auto np = prenex_pi2(Formula::mknot(sentence));
    if (!s2.ok() || !np.ok()) {
      ok = false;
      continue;
    }
    auto cs = decide_sigma2(*s2);
    auto cp = decide_pi2(*np);
    if (cs.verdict == Verdict::Unknown || cp.verdict == Verdict::Unknown ||
        (cs.verdict == Verdict::True) != (cp.verdict == Verdict::False))
      ok = false;
    ++checked;
  }
  report(3, "duality on 110 random two-block sentences", ok && checked >= 100);
}

void criterion_4() {
  bool ok = true;
  long long pairs = 0;
  for (const auto& v : enumerate_usl_top_cached(6)) {
    auto subs = all_substructures(v);
    for (const auto& w : subs) {
      bool single = decide_question1(w.small, {w});
      if (single != literal_aee(w)) ok = false;
      ++pairs;
    }
    // batched form: every candidate sharing the same small structure
    for (size_t i = 0; i < subs.size(); ++i) {
      std::vector<SubstructureWitness> batch;
      for (size_t j = 0; j < subs.size(); ++j)
        if (subs[j].small.same_order(subs[i].small) &&
            subs[j].small.names() == subs[i].small.names())
          batch.push_back(subs[j]);
      bool any = false;
      for (const auto& w : batch) any = any || literal_aee(w);
      if (decide_question1(subs[i].small, batch) != any) ok = false;
    }
  }
  report(4, "question-1 kernel vs literal disjunction, |V| <= 6", ok && pairs > 100);
}

void criterion_5() {
  auto counts = usl_top_counts(5);
  bool ok = counts == std::vector<long long>{1, 1, 1, 2, 5};
  report(5, "enumeration counts 1,1,1,2 and frozen 5 at size 5", ok);
}

void criterion_6() {
  bool ok = true;
  for (const auto& u : enumerate_usl_top_cached(6)) {
    for (int k = 1; k <= 3; ++k) {
      std::vector<std::string> gens;
      for (int i = 0; i < k; ++i) gens.push_back("g" + std::to_string(i));
      auto fe = free_extend(u, gens);
      if (fe.result.size() != (u.size() - 1) * (1 << k) + 1) ok = false;
      if (!verify_embedding(fe.embedding, u, fe.result).ok()) ok = false;
      SubstructureWitness w{u, fe.result, fe.embedding};
      if (!check_substructure(w).empty() || !is_almost_end_extension(w)) ok = false;
    }
  }
  report(6, "free-extension size law and a.i.s. embedding", ok);
}

void criterion_7() {
  auto t0 = Clock::now();
  bool ok = true;
  for (const auto& v : enumerate_usl_top_cached(6)) {
    for (const auto& w : all_substructures(v)) {
      if (!literal_aee(w)) {
        if (decompose(w).ok()) ok = false;
        continue;
      }
      auto dec = decompose(w);
      if (!dec.ok()) {
        ok = false;
        continue;
      }
      SubstructureWitness first{dec->u, dec->u1.result, dec->u1.embedding};
      if (!check_substructure(first).empty() || !is_almost_end_extension(first)) ok = false;
      if (!is_join_congruence(dec->u2prime.result, dec->congruence)) ok = false;
      SubstructureWitness second{dec->v, dec->u2, dec->f};
      if (!check_substructure(second).empty()) ok = false;
      if (!verify_embedding(dec->f, dec->v, dec->u2).ok()) ok = false;
      // U1 into U2 is a simple almost-end-extension
      SubstructureWitness u1_in_u2{dec->u1.result, dec->u2, dec->u1_into_u2};
      if (!check_substructure(u1_in_u2).empty() || !is_almost_end_extension(u1_in_u2)) ok = false;
      if (!is_simple_extension(u1_in_u2).has_value() &&
          dec->u2.size() != dec->u1.result.size())
        ok = false;
      for (ElementId e = 0; e < dec->u.size(); ++e)
        if (dec->u1_into_u2[dec->u1.embedding[e]] != dec->f[dec->inclusion[e]]) ok = false;
    }
  }
  report(7, "decomposition sweep, |V| <= 6, all invariants", ok && seconds_since(t0) < 600.0);
}

void criterion_8() {
  bool ok = true;
  for (const auto& l : enumerate_usl_top_cached(5)) {
    auto t = build_table(l);
    if (!verify_table(t).pass()) ok = false;
  }
  auto r = build_rep_prefix(FiniteUslTop::diamond(), 1, true);
  if (!r.ok() || !r->coding.has_value() || !verify_coding_ready(*r).pass()) ok = false;
  if (r.ok()) {
    // property (5) is part of verify_coding_ready; re-check the escape
    // existence it rests on, per coatom
    for (ElementId x : r->lattice.coatoms())
      for (int c : r->coding->coding_set) {
        int beta = escape_map(*r, c, x);
        if (beta < 0 || r->coding->in_c(beta) || !r->theta[0].eq_at(beta, c, x)) ok = false;
      }
  }
  report(8, "tables for all lattices <= 5, coding-ready diamond prefix", ok);
}

void criterion_9() {
  auto r = build_rep_prefix(FiniteUslTop::diamond(), 1, true);
  bool ok = r.ok();
  if (ok) {
    auto coatoms = r->lattice.coatoms();
    std::mt19937 rng(190);
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      ElementId x = coatoms[rng() % 2];
      ElementId y = x == coatoms[0] ? coatoms[1] : coatoms[0];
      int len = (int)(rng() % 33);
      std::vector<int> bits;
      for (int i = 0; i < len; ++i) bits.push_back((int)(rng() % 2));
      auto t = identity_tree(*r, len);
      auto sigma = encode_bits(t, x, y, bits);
      if (!sigma.ok()) {
        ok = false;
        break;
      }
      auto back = decode_bits(*r, *sigma, x, y);
      if (!back.ok() || *back != bits) ok = false;
    }
    int n0 = (int)r->theta[0].maps.size();
    for (ElementId x : coatoms)
      for (int a = 0; a < n0 && ok; ++a)
        for (int b = 0; b < n0; ++b) {
          auto safe = x_safe(*r, {a, b}, x);
          for (size_t j = 0; j < 2; ++j) {
            if (r->coding->in_c(safe[j])) ok = false;
            if (!r->theta[0].eq_at(safe[j], std::vector<int>{a, b}[j], x)) ok = false;
          }
        }
  }
  report(9, "coding round trip and x_safe sweeps", ok);
}

void criterion_10() {
  auto rr = build_rep_prefix(FiniteUslTop::diamond(), 1, true);
  bool ok = rr.ok();
  if (ok) {
    const auto& rep = *rr;
    std::mt19937 rng(1100);
    for (int trial = 0; trial < 60 && ok; ++trial) {
      // systematic family: all structural knobs cycle through their ranges
      UniformTreeSpec t;
      t.rep = rep;
      t.depth = 3;
      int root_len = trial % 2, stem_len = (trial / 2) % 2, tail_extra = (trial / 4) % 2;
      int pos = 0;
      for (int i = 0; i < root_len; ++i)
        t.root.push_back((int)(rng() % rep.stage_at(pos++).maps.size()));
      for (int l = 0; l < 3; ++l) {
        UniformTreeSpec::Level lv;
        for (int i = 0; i < stem_len; ++i)
          lv.pi.push_back((int)(rng() % rep.stage_at(pos++).maps.size()));
        int arity = (int)rep.stage_at(l).maps.size();
        int fork = pos;
        for (int a = 0; a < arity; ++a) {
          std::vector<int> tail = {a};
          for (int i = 0; i < tail_extra; ++i)
            tail.push_back((int)(rng() % rep.stage_at(fork + 1 + i).maps.size()));
          lv.rho.push_back(tail);
        }
        pos = fork + 1 + tail_extra;
        t.levels.push_back(lv);
      }
      if (!validate_tree(t).empty()) {
        ok = false;
        break;
      }
      // exhaustive inputs to depth 2, sampled third coordinate
      int n0 = (int)t.input_stage(0).maps.size();
      int n1 = (int)t.input_stage(1).maps.size();
      for (int a = 0; a < n0 && ok; ++a)
        for (int b = 0; b < n1; ++b) {
          std::vector<int> s = {a, b};
          auto full = husl::apply(t, s);
          auto half = husl::apply(t, {a});
          if (!full.ok() || !half.ok() ||
              !std::equal(half->begin(), half->end(), full->begin())) {
            ok = false;
            break;
          }
          int c = (int)(rng() % t.input_stage(2).maps.size());
          auto s3 = s;
          s3.push_back(c);
          auto deep = husl::apply(t, s3);
          if (!deep.ok()) {
            ok = false;
            break;
          }
          if (!std::equal(full->begin(), full->end(), deep->begin())) ok = false;
          // composition
          auto ts = restrict_tree(t, {a});
          if (!ts.ok()) {
            ok = false;
            break;
          }
          auto lhs = husl::apply(*ts, {b, c});
          if (!lhs.ok() || *lhs != *deep) ok = false;
          // non-order: same length, different string, different output
          if (b + 1 < n1) {
            auto other = husl::apply(t, {a, b + 1});
            if (!other.ok() || *other == *full) ok = false;
          }
        }
      // checker preservation
      bool bcf = check_branch_coding_free(t).pass();
      bool cr = check_congruence_respecting(t).pass();
      auto ts = restrict_tree(t, {trial % n0});
      if (!ts.ok()) ok = false;
      if (ok && bcf && !check_branch_coding_free(*ts).pass()) ok = false;
      if (ok && cr && !check_congruence_respecting(*ts).pass()) ok = false;
      std::vector<int> mu;
      for (size_t i = 0; i < t.root.size(); ++i)
        mu.push_back((int)(rng() % rep.stage_at((int)i).maps.size()));
      auto tt = transfer_tree(t, mu);
      if (!tt.ok()) ok = false;
      if (ok && bcf && !check_branch_coding_free(*tt).pass()) ok = false;
      if (ok && cr && !check_congruence_respecting(*tt).pass()) ok = false;
    }
  }
  report(10, "uniform-tree laws and checker preservation at depth <= 3", ok);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all criteria passed\n");
  return failures ? 1 : 0;
}
