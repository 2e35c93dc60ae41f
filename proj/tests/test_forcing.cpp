#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "husl/serialize.hpp"
#include "husl/table.hpp"
#include "husl/tree.hpp"

using namespace husl;

namespace {

RepPrefix diamond_rep() {
  static RepPrefix rep = [] {
    auto r = build_rep_prefix(FiniteUslTop::diamond(), 1, true);
    REQUIRE(r.ok());
    return *r;
  }();
  return rep;
}

// Random well-formed tree over the rep: random stems, random tails obeying
// the leading-alpha clause and the congruence-respecting discipline (tails
// depend only on the fork map).
UniformTreeSpec random_tree(const RepPrefix& rep, int depth, int root_len, std::mt19937& rng) {
  UniformTreeSpec t;
  t.rep = rep;
  t.depth = depth;
  auto pick = [&](int pos) {
    const auto& st = rep.stage_at(pos);
    return (int)(rng() % st.maps.size());
  };
  int pos = 0;
  for (int i = 0; i < root_len; ++i) t.root.push_back(pick(pos++));
  for (int l = 0; l < depth; ++l) {
    UniformTreeSpec::Level lv;
    int stem_len = (int)(rng() % 3);
    // the fork consumes input position l; stem and tails land at output
    // positions, which only grow rightward, so stage_at(pos) stays legal
    for (int i = 0; i < stem_len; ++i) lv.pi.push_back(pick(pos++));
    int arity = (int)rep.stage_at(l).maps.size();
    int tail_extra = (int)(rng() % 2);
    int fork_pos = pos;
    for (int a = 0; a < arity; ++a) {
      std::vector<int> tail = {a};
      for (int i = 0; i < tail_extra; ++i) tail.push_back(pick(fork_pos + 1 + i));
      lv.rho.push_back(tail);
    }
    pos = fork_pos + 1 + tail_extra;
    t.levels.push_back(lv);
  }
  return t;
}

std::vector<int> random_input(const UniformTreeSpec& t, int len, std::mt19937& rng) {
  std::vector<int> s;
  for (int l = 0; l < len; ++l) s.push_back((int)(rng() % t.input_stage(l).maps.size()));
  return s;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("identity tree is the identity") {
  auto rep = diamond_rep();
  auto t = identity_tree(rep, 3);
  CHECK(validate_tree(t).empty());
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto s = random_input(t, (int)(rng() % 4), rng);
    auto out = husl::apply(t, s);
    REQUIRE(out.ok());
    CHECK(*out == s);
  }
  CHECK(!husl::apply(t, random_input(t, 4, rng)).ok());  // beyond the depth
}

TEST_CASE("random trees validate and satisfy the order laws") {
  auto rep = diamond_rep();
  std::mt19937 rng(500);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_tree(rep, 3, (int)(rng() % 3), rng);
    REQUIRE(validate_tree(t).empty());

    auto s = random_input(t, 3, rng);
    for (int cut = 0; cut <= 3; ++cut) {
      std::vector<int> prefix(s.begin(), s.begin() + cut);
      auto big = husl::apply(t, s);
      auto small = husl::apply(t, prefix);
      REQUIRE(big.ok());
      REQUIRE(small.ok());
      // order law: prefixes map to prefixes
      REQUIRE(small->size() <= big->size());
      CHECK(std::equal(small->begin(), small->end(), big->begin()));
    }

    // non-order law: distinct same-length inputs stay distinct
    auto s2 = random_input(t, 3, rng);
    if (s2 != s) {
      auto o1 = husl::apply(t, s);
      auto o2 = husl::apply(t, s2);
      CHECK(*o1 != *o2);
    }
  }
}

TEST_CASE("restriction composes") {
  auto rep = diamond_rep();
  std::mt19937 rng(501);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_tree(rep, 3, (int)(rng() % 3), rng);
    auto sigma = random_input(t, 1 + (int)(rng() % 2), rng);
    auto ts = restrict_tree(t, sigma);
    REQUIRE(ts.ok());
    CHECK(validate_tree(*ts).empty());
    for (int len = 0; len <= 3 - (int)sigma.size(); ++len) {
      auto tau = random_input(*ts, len, rng);
      auto lhs = husl::apply(*ts, tau);
      auto rhs = husl::apply(t, concat(sigma, tau));
      REQUIRE(lhs.ok());
      REQUIRE(rhs.ok());
      CHECK(*lhs == *rhs);
    }
  }
}

TEST_CASE("transfer rewrites the root only") {
  auto rep = diamond_rep();
  std::mt19937 rng(502);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = random_tree(rep, 2, 2 + (int)(rng() % 2), rng);
    std::vector<int> mu;
    for (int i = 0; i < 2; ++i) mu.push_back((int)(rng() % rep.stage_at(i).maps.size()));
    auto tt = transfer_tree(t, mu);
    REQUIRE(tt.ok());
    CHECK(validate_tree(*tt).empty());
    auto s = random_input(t, 2, rng);
    auto before = husl::apply(t, s);
    auto after = husl::apply(*tt, s);
    REQUIRE(before.ok());
    REQUIRE(after.ok());
    REQUIRE(before->size() == after->size());
    for (size_t j = 0; j < before->size(); ++j) {
      if (j < mu.size()) CHECK((*after)[j] == mu[j]);
      else CHECK((*after)[j] == (*before)[j]);
    }

    // wrong length is rejected
    CHECK(!transfer_tree(t, std::vector<int>(t.root.size() + 1, 0)).ok());
  }
}

TEST_CASE("checkers survive restriction and transfer") {
  auto rep = diamond_rep();
  std::mt19937 rng(503);
  int preserved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto t = random_tree(rep, 3, (int)(rng() % 3), rng);
    bool bcf = check_branch_coding_free(t).pass();
    bool cr = check_congruence_respecting(t).pass();
    auto sigma = random_input(t, 1, rng);
    auto ts = restrict_tree(t, sigma);
    REQUIRE(ts.ok());
    if (bcf) CHECK(check_branch_coding_free(*ts).pass());
    if (cr) CHECK(check_congruence_respecting(*ts).pass());

    std::vector<int> mu;
    for (size_t i = 0; i < t.root.size(); ++i)
      mu.push_back((int)(rng() % rep.stage_at((int)i).maps.size()));
    auto tt = transfer_tree(t, mu);
    REQUIRE(tt.ok());
    if (bcf && std::all_of(mu.begin(), mu.end(),
                           [&](int m) { return !rep.coding->in_c(m); }))
      CHECK(check_branch_coding_free(*tt).pass());
    if (cr) CHECK(check_congruence_respecting(*tt).pass());
    if (bcf && cr) ++preserved;
  }
  CHECK(preserved > 0);
}

TEST_CASE("congruence respecting catches a bad tail") {
  auto rep = diamond_rep();
  auto t = identity_tree(rep, 2);
  // two maps congruent at every element would be equal, so instead check
  // the detector on a tree whose tails diverge below congruent forks
  const auto& st = t.input_stage(0);
  ElementId a = rep.lattice.coatoms()[0];
  int m0 = -1, m1 = -1;
  for (int i = 0; i < (int)st.maps.size() && m0 < 0; ++i)
    for (int j = i + 1; j < (int)st.maps.size(); ++j)
      if (st.eq_at(i, j, a)) {
        m0 = i;
        m1 = j;
        break;
      }
  REQUIRE(m0 >= 0);
  int c0 = -1, c1 = -1;
  for (int i = 0; i < (int)st.maps.size() && c0 < 0; ++i)
    for (int j = i + 1; j < (int)st.maps.size(); ++j)
      if (!st.eq_at(i, j, a)) {
        c0 = i;
        c1 = j;
        break;
      }
  REQUIRE(c0 >= 0);
  for (auto& tail : t.levels[0].rho) tail.push_back(c0);
  t.levels[0].rho[m1].back() = c1;
  t.depth = 2;
  REQUIRE(validate_tree(t).empty());
  CHECK(!check_congruence_respecting(t).pass());
}

TEST_CASE("branch coding detection") {
  auto rep = diamond_rep();
  auto t = identity_tree(rep, 2);
  CHECK(check_branch_coding_free(t).pass());
  // plant a coding value inside a stem
  t.levels[1].pi.push_back(rep.coding->coding_set[0]);
  CHECK(!check_branch_coding_free(t).pass());
}

TEST_CASE("root coding counts") {
  auto rep = diamond_rep();
  auto coatoms = rep.lattice.coatoms();
  ElementId x = coatoms[0], y = coatoms[1];
  int g0 = rep.coding->g.at({x, y, 0});
  auto t = identity_tree(rep, 1);
  t.root = {g0, g0};
  auto c = root_coding_count(t, x, y);
  REQUIRE(c.ok());
  CHECK(*c == 2);
  CHECK(!root_coding_count(t, x, rep.lattice.bot()).ok());  // pair must join to top

  auto s = identity_tree(rep, 1);
  s.root = {g0, g0};
  auto same = no_more_root_coding(s, t);
  REQUIRE(same.ok());
  CHECK(*same);
  s.root = {g0};
  auto fewer = no_more_root_coding(s, t);
  REQUIRE(fewer.ok());
  CHECK(!*fewer);
}

TEST_CASE("bit encoding round trips") {
  auto rep = diamond_rep();
  auto coatoms = rep.lattice.coatoms();
  std::mt19937 rng(90210);
  for (int trial = 0; trial < 1000; ++trial) {
    ElementId x = coatoms[rng() % 2];
    ElementId y = x == coatoms[0] ? coatoms[1] : coatoms[0];
    int len = (int)(rng() % 33);
    std::vector<int> bits;
    for (int i = 0; i < len; ++i) bits.push_back((int)(rng() % 2));

    auto t = identity_tree(rep, len);
    auto sigma = encode_bits(t, x, y, bits);
    REQUIRE(sigma.ok());
    auto back = decode_bits(rep, *sigma, x, y);
    REQUIRE(back.ok());
    CHECK(*back == bits);
  }

  auto t1 = identity_tree(rep, 1);
  CHECK(!encode_bits(t1, coatoms[0], coatoms[1], {0, 1}).ok());
}

TEST_CASE("x_safe strips every coded bit and respects the congruence") {
  auto rep = diamond_rep();
  auto coatoms = rep.lattice.coatoms();
  const auto& st0 = rep.theta[0];
  int n0 = (int)st0.maps.size();
  // exhaustive over all strings of length <= 2 over theta0
  std::vector<std::vector<int>> strings = {{}};
  for (int a = 0; a < n0; ++a) {
    strings.push_back({a});
    for (int b = 0; b < n0; ++b) strings.push_back({a, b});
  }
  for (ElementId x : coatoms) {
    ElementId y = x == coatoms[0] ? coatoms[1] : coatoms[0];
    for (const auto& s : strings) {
      auto safe = x_safe(rep, s, x);
      REQUIRE(safe.size() == s.size());
      for (size_t j = 0; j < s.size(); ++j) {
        CHECK(!rep.coding->in_c(safe[j]));
        CHECK(st0.eq_at(safe[j], s[j], x));
      }
      auto dec = decode_bits(rep, safe, x, y);
      REQUIRE(dec.ok());
      CHECK(dec->empty());
    }
  }
}

TEST_CASE("splits appear exactly when the table distinguishes inputs") {
  auto rep = diamond_rep();
  auto coatoms = rep.lattice.coatoms();
  ElementId x = coatoms[0], y = coatoms[1];
  auto t = identity_tree(rep, 2);

  DecisionTable constant = [](int, const std::vector<int>&) { return 0; };
  CHECK(find_splits(t, constant, x, y, 2).empty());

  // answer from the x-value of the first entry: any y-congruent pair with
  // different x-values splits
  const auto rep2 = rep;
  DecisionTable by_x = [rep2, x](int n, const std::vector<int>& s) {
    return n >= 1 ? rep2.theta[0].maps[s[0]][x] % 2 : 0;
  };
  auto splits = find_splits(t, by_x, x, y, 2);
  CHECK(!splits.empty());
  for (const auto& sp : splits) {
    REQUIRE(sp.sigma.size() == sp.tau.size());
    for (size_t j = 0; j < sp.sigma.size(); ++j)
      CHECK(t.input_stage((int)j).eq_at(sp.sigma[j], sp.tau[j], y));
    CHECK(by_x(sp.n, sp.sigma) != by_x(sp.n, sp.tau));
  }

  CHECK(sp_set(t, constant, x, {}, 2).size() == (size_t)rep.lattice.size());
  auto sp = sp_set(t, by_x, x, {}, 2);
  CHECK(std::find(sp.begin(), sp.end(), y) == sp.end());
}

TEST_CASE("tree documents round trip") {
  auto rep = diamond_rep();
  std::mt19937 rng(77);
  auto t = random_tree(rep, 2, 2, rng);
  TreeDoc doc{"t", t};
  auto text = format_tree(doc);
  auto back = parse_tree_doc(text);
  REQUIRE(back.ok());
  CHECK(back->tree.depth == t.depth);
  CHECK(back->tree.root == t.root);
  REQUIRE(back->tree.levels.size() == t.levels.size());
  for (size_t l = 0; l < t.levels.size(); ++l) {
    CHECK(back->tree.levels[l].pi == t.levels[l].pi);
    CHECK(back->tree.levels[l].rho == t.levels[l].rho);
  }
  std::mt19937 rng2(78);
  auto s = random_input(t, 2, rng2);
  CHECK(*husl::apply(back->tree, s) == *husl::apply(t, s));
}
