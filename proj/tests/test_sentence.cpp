#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "husl/decide.hpp"
#include "husl/enumerate.hpp"
#include "husl/sentence.hpp"

using namespace husl;

namespace {

// Random quantifier-free matrix over the given variables, seeded.
TermPtr random_term(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 2);
  switch (pick(rng)) {
    case 0: return Term::zero();
    case 1: return Term::one();
    case 2: {
      std::uniform_int_distribution<int> v(0, (int)vars.size() - 1);
      return Term::mkvar(vars[v(rng)]);
    }
    default:
      return Term::mkjoin(random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1));
  }
}

FormulaPtr random_matrix(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 5 : 1);
  switch (pick(rng)) {
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

// Direct satisfiability search: some structure of size <= bound and some
// assignment makes the matrix true. Sound and complete for the existential
// fragment because a witness restricts to its generated substructure.
bool sigma1_oracle(const std::vector<std::string>& vars, const FormulaPtr& matrix, int bound) {
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

// Validity over every structure of size <= bound under every assignment.
bool pi1_oracle(const std::vector<std::string>& vars, const FormulaPtr& matrix, int bound) {
  return !sigma1_oracle(vars, Formula::mknot(matrix), bound);
}

}  // namespace

TEST_CASE("parser examples") {
  auto r = parse_sentence("exists x . x = x");
  REQUIRE(r.ok());
  CHECK((*r)->kind == Formula::Kind::Exists);

  r = parse_sentence("forall y . y <= 1");
  REQUIRE(r.ok());
  CHECK((*r)->kind == Formula::Kind::Forall);

  SyntaxError err;
  auto bad = parse_sentence("exists x . x + ", &err);
  CHECK(!bad.ok());
  CHECK(!err.empty());

  // unbound variable
  CHECK(!parse_sentence("exists x . x <= y").ok());

  // precedence: ! binds tighter than &, -> is right associative
  r = parse_sentence("exists x . !x = 0 & x <= 1");
  REQUIRE(r.ok());
  r = parse_sentence("exists x . x = 0 -> x = 1 -> 0 = 1");
  REQUIRE(r.ok());
}

TEST_CASE("to_string parses back") {
  const char* samples[] = {
      "exists x . x = x",
      "exists x y . x + y = 1 & !(x = 1) & !(y = 1)",
      "forall x . exists y . (x <= y & !(x = y)) \\/ x = 1",
  };
  for (const char* s : samples) {
    auto r = parse_sentence(s);
    REQUIRE(r.ok());
    auto again = parse_sentence(to_string(*r));
    REQUIRE(again.ok());
    CHECK(to_string(*r) == to_string(*again));
  }
}

TEST_CASE("prenex fragments") {
  auto s = parse_sentence("exists x . forall y . y <= x");
  REQUIRE(s.ok());
  auto p = prenex_sigma2(*s);
  REQUIRE(p.ok());
  CHECK(p->existential_vars == std::vector<std::string>{"x"});
  CHECK(p->universal_vars == std::vector<std::string>{"y"});

  auto pi = parse_sentence("forall y . exists x . y <= x");
  REQUIRE(pi.ok());
  CHECK(!prenex_sigma2(*pi).ok());
  CHECK(prenex_pi2(*pi).ok());

  // negation pushes through both quantifiers
  auto neg = parse_sentence("!(forall x . exists y . !(x <= y))");
  REQUIRE(neg.ok());
  auto np = prenex_sigma2(*neg);
  REQUIRE(np.ok());
  CHECK(np->existential_vars.size() == 1);
  CHECK(np->universal_vars.size() == 1);

  // three alternations fit neither fragment
  auto three = parse_sentence("exists x . forall y . exists z . z = z");
  REQUIRE(three.ok());
  CHECK(!prenex_sigma2(*three).ok());
  CHECK(!prenex_pi2(*three).ok());
}

TEST_CASE("existential fragment agrees with the satisfiability oracle") {
  std::mt19937 rng(20260824);
  int agree = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int m = 1 + (int)(rng() % 2);
    std::vector<std::string> vars(m);
    for (int i = 0; i < m; ++i) vars[i] = std::string(1, char('x' + i));
    auto matrix = random_matrix(rng, vars, 3);

    PrenexSigma2 s{vars, {}, matrix};
    auto cert = decide_sigma2(s);
    REQUIRE(cert.verdict != Verdict::Unknown);
    bool expected = sigma1_oracle(vars, matrix, (1 << m) + 1);
    CHECK((cert.verdict == Verdict::True) == expected);
    if ((cert.verdict == Verdict::True) == expected) ++agree;
  }
  CHECK(agree >= 100);
}

TEST_CASE("universal fragment agrees with the validity oracle") {
  std::mt19937 rng(7151);
  int agree = 0;
  for (int trial = 0; trial < 120; ++trial) {
    int k = 1 + (int)(rng() % 2);
    std::vector<std::string> vars(k);
    for (int i = 0; i < k; ++i) vars[i] = std::string(1, char('x' + i));
    auto matrix = random_matrix(rng, vars, 3);

    PrenexPi2 s{vars, {}, matrix};
    auto cert = decide_pi2(s);
    REQUIRE(cert.verdict != Verdict::Unknown);
    bool expected = pi1_oracle(vars, matrix, (1 << k) + 1);
    CHECK((cert.verdict == Verdict::True) == expected);
    if ((cert.verdict == Verdict::True) == expected) ++agree;
  }
  CHECK(agree >= 100);
}

TEST_CASE("the two deciders are dual on random sentences") {
  std::mt19937 rng(424243);
  int checked = 0;
  for (int trial = 0; trial < 110; ++trial) {
    std::vector<std::string> evars = {"x"};
    std::vector<std::string> uvars = {"y"};
    if (rng() % 3 == 0) uvars.push_back("z");
    std::vector<std::string> all = evars;
    all.insert(all.end(), uvars.begin(), uvars.end());
    auto matrix = random_matrix(rng, all, 3);

    auto sentence = Formula::exists(evars, Formula::forall(uvars, matrix));
    auto s2 = prenex_sigma2(sentence);
    REQUIRE(s2.ok());
    auto negp = prenex_pi2(Formula::mknot(sentence));
    REQUIRE(negp.ok());

    auto cs = decide_sigma2(*s2);
    auto cp = decide_pi2(*negp);
    REQUIRE(cs.verdict != Verdict::Unknown);
    REQUIRE(cp.verdict != Verdict::Unknown);
    CHECK((cs.verdict == Verdict::True) == (cp.verdict == Verdict::False));
    ++checked;
  }
  CHECK(checked >= 100);
}

TEST_CASE("certificates replay") {
  auto t = parse_sentence("exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))");
  REQUIRE(t.ok());
  auto s2 = prenex_sigma2(*t);
  REQUIRE(s2.ok());
  auto cert = decide_sigma2(*s2);
  CHECK(cert.verdict == Verdict::True);
  REQUIRE(cert.witness.has_value());
  CHECK(check_certificate(cert));

  auto f = parse_sentence("exists x . !(x = 1) & forall y . y <= x");
  REQUIRE(f.ok());
  auto fc = decide_sigma2(*prenex_sigma2(*f));
  CHECK(fc.verdict == Verdict::False);
  CHECK(!fc.refutations.empty());
  CHECK(check_certificate(fc));

  auto p = parse_sentence("forall x . exists y . !(y <= x) & !(x <= y)");
  REQUIRE(p.ok());
  auto pc = decide_pi2(*prenex_pi2(*p));
  CHECK(pc.verdict == Verdict::False);
  REQUIRE(pc.refutation.has_value());
  CHECK(check_certificate(pc));
}

TEST_CASE("caps yield unknown instead of a wrong answer") {
  auto s = parse_sentence("exists x y . forall u . x <= y \\/ u = u");
  REQUIRE(s.ok());
  auto p = prenex_sigma2(*s);
  REQUIRE(p.ok());
  RunCaps caps;
  caps.max_exists = 1;
  auto cert = decide_sigma2(*p, caps);
  CHECK(cert.verdict == Verdict::Unknown);
  CHECK(!cert.note.empty());

  // and the default caps decide the same sentence
  CHECK(decide_sigma2(*p).verdict != Verdict::Unknown);
}

TEST_CASE("witness structure enumeration covers the small classes") {
  auto none = enumerate_witness_structures(0);
  CHECK(none.size() == 2);  // {0,1} and the collapsed point

  auto one = enumerate_witness_structures(1);
  bool at_bot = false, at_top = false, strict = false;
  for (const auto& w : one) {
    REQUIRE(w.assignment.size() == 1);
    ElementId x = w.assignment[0];
    if (w.u.size() == 2 && x == w.u.bot()) at_bot = true;
    if (w.u.size() == 2 && x == w.u.top()) at_top = true;
    if (w.u.size() == 3 && x != w.u.bot() && x != w.u.top()) strict = true;
    // generated by the assignment plus the constants
    auto g = generated_substructure(w.u, {x});
    CHECK(g.small.size() == w.u.size());
  }
  CHECK(at_bot);
  CHECK(at_top);
  CHECK(strict);

  auto two = enumerate_witness_structures(2);
  bool diamond = false;
  for (const auto& w : two)
    if (w.u.size() == 4 && !w.u.leq(w.assignment[0], w.assignment[1]) &&
        !w.u.leq(w.assignment[1], w.assignment[0]) &&
        w.u.join(w.assignment[0], w.assignment[1]) == w.u.top())
      diamond = true;
  CHECK(diamond);
}
