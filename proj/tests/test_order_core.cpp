#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "husl/enumerate.hpp"
#include "husl/io.hpp"
#include "husl/usl.hpp"

using namespace husl;

namespace {

// Independent generator used as a cross-check on the enumerator: brute
// force over all orientations of the middle-element pairs, keep transitive
// ones, bolt on bot and top, validate, dedup by isomorphism search.
std::vector<FiniteUslTop> brute_force_usl_top(int n) {
  std::vector<FiniteUslTop> out;
  if (n == 1) {
    out.push_back(FiniteUslTop::singleton());
    return out;
  }
  int k = n - 2;  // middle elements 1..n-2
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j) pairs.emplace_back(i, j);
  long long combos = 1;
  for (size_t i = 0; i < pairs.size(); ++i) combos *= 3;
  for (long long c = 0; c < combos; ++c) {
    // per pair: 0 incomparable, 1 i<j, 2 j<i
    std::vector<std::uint64_t> up(n, 0);
    for (int i = 0; i < n; ++i) up[i] |= 1ull << i;
    long long rest = c;
    for (auto [i, j] : pairs) {
      int choice = rest % 3;
      rest /= 3;
      if (choice == 1) up[i] |= 1ull << j;
      if (choice == 2) up[j] |= 1ull << i;
    }
    // must already be transitive, otherwise this orientation is not a poset
    bool transitive = true;
    for (int i = 1; i <= k && transitive; ++i)
      for (int j = 1; j <= k && transitive; ++j)
        if (i != j && ((up[i] >> j) & 1))
          if ((up[i] | up[j]) != up[i]) transitive = false;
    if (!transitive) continue;
    for (int i = 0; i < n; ++i) up[0] |= 1ull << i;          // bot below all
    for (int i = 0; i < n; ++i) up[i] |= 1ull << (n - 1);    // top above all
    auto r = FiniteUslTop::validate(n, up, 0, n - 1);
    if (!r.ok()) continue;  // some join missing
    bool fresh = true;
    for (const auto& seen : out)
      if (find_isomorphism(seen, *r)) {
        fresh = false;
        break;
      }
    if (fresh) out.push_back(*r);
  }
  return out;
}

}  // namespace

TEST_CASE("chain and diamond basics") {
  auto c = FiniteUslTop::chain(4);
  CHECK(c.size() == 4);
  CHECK(c.bot() == 0);
  CHECK(c.top() == 3);
  CHECK(c.leq(1, 2));
  CHECK(!c.leq(2, 1));
  CHECK(c.join(1, 2) == 2);
  CHECK(c.meet(1, 2) == 1);
  CHECK(c.coatoms() == std::vector<ElementId>{2});

  auto d = FiniteUslTop::diamond();
  CHECK(d.size() == 4);
  CHECK(d.join(1, 2) == d.top());
  CHECK(d.meet(1, 2) == d.bot());
  CHECK(d.coatoms().size() == 2);
}

TEST_CASE("validate rejects broken inputs") {
  // cycle a <= b <= a with distinct a, b
  std::vector<std::uint64_t> up = {0b1111, 0b0110, 0b0110, 0b1000};
  auto r = FiniteUslTop::validate(4, up, 0, 3);
  CHECK(!r.ok());

  // bot not least
  up = {0b0001, 0b1111, 0b0100, 0b1000};
  r = FiniteUslTop::validate(4, up, 0, 3);
  CHECK(!r.ok());

  // two minimal upper bounds, no join: bot < a,b < c,d < top
  up = {0b111111, 0b111010, 0b111100, 0b101000, 0b110000, 0b100000};
  r = FiniteUslTop::validate(6, up, 0, 5);
  CHECK(!r.ok());
  CHECK(r.diag.code == "NoJoin");
}

TEST_CASE("from_covers closes transitively") {
  auto r = FiniteUslTop::from_covers(4, {{0, 1}, {1, 2}, {2, 3}}, 0, 3);
  REQUIRE(r.ok());
  CHECK(r->leq(0, 3));
  CHECK(r->same_order(FiniteUslTop::chain(4)));
}

TEST_CASE("substructure and almost-end-extension checks") {
  auto v = FiniteUslTop::diamond();
  auto two = FiniteUslTop::chain(2);

  SubstructureWitness w{two, v, {0, 3}};
  CHECK(check_substructure(w).empty());
  // everything over {bot, top} is an almost-end-extension
  CHECK(is_almost_end_extension(w));

  // 3-chain inside the diamond: the other coatom is incomparable with the
  // image coatom, so nothing new sits below it
  auto three = FiniteUslTop::chain(3);
  SubstructureWitness w2{three, v, {0, 1, 3}};
  CHECK(check_substructure(w2).empty());
  CHECK(is_almost_end_extension(w2));

  // 0 < m < a,b < 1: chain 0 < a < 1 maps in, and the middle m sits
  // strictly below the non-top image a
  auto big = FiniteUslTop::from_covers(5, {{0, 1}, {1, 2}, {1, 3}, {2, 4}, {3, 4}}, 0, 4);
  REQUIRE(big.ok());
  SubstructureWitness w3{three, *big, {0, 2, 4}};
  CHECK(check_substructure(w3).empty());
  CHECK(!is_almost_end_extension(w3));

  // not even a substructure: join not preserved
  SubstructureWitness bad{three, v, {0, 1, 2}};
  CHECK(!check_substructure(bad).empty());
}

TEST_CASE("generated substructure") {
  auto d = FiniteUslTop::diamond();
  auto g = generated_substructure(d, {1});
  CHECK(g.small.size() == 3);
  CHECK(check_substructure(g).empty());

  auto g2 = generated_substructure(d, {1, 2});
  CHECK(g2.small.size() == 4);
}

TEST_CASE("isomorphisms and automorphisms") {
  auto d = FiniteUslTop::diamond();
  auto iso = find_isomorphism(d, d);
  REQUIRE(iso.has_value());
  CHECK(automorphisms(d).size() == 2);  // identity and the coatom swap
  CHECK(automorphisms(FiniteUslTop::chain(4)).size() == 1);

  CHECK(!find_isomorphism(FiniteUslTop::chain(4), d).has_value());

  // relabeled diamond is isomorphic and has the same canonical key
  auto r = FiniteUslTop::from_covers(4, {{0, 2}, {0, 3}, {2, 1}, {3, 1}}, 0, 1);
  REQUIRE(r.ok());
  CHECK(find_isomorphism(d, *r).has_value());
  CHECK(canonical_key(d) == canonical_key(*r));
  CHECK(canonical_form(d).same_order(canonical_form(canonical_form(*r))));
}

TEST_CASE("enumeration counts match the frozen values") {
  auto counts = usl_top_counts(5);
  CHECK(counts == std::vector<long long>{1, 1, 1, 2, 5});
}

TEST_CASE("enumeration agrees with the brute-force generator") {
  for (int n = 1; n <= 5; ++n) {
    auto brute = brute_force_usl_top(n);
    auto enumerated = enumerate_usl_top_cached(n);
    int of_size = 0;
    for (const auto& u : enumerated)
      if (u.size() == n) ++of_size;
    CHECK(of_size == (int)brute.size());
    // and every brute-force structure appears up to isomorphism
    for (const auto& b : brute) {
      bool found = false;
      for (const auto& e : enumerated)
        if (e.size() == n && find_isomorphism(b, e)) {
          found = true;
          break;
        }
      CHECK(found);
    }
  }
}

TEST_CASE("enumeration is deterministic and validated") {
  auto a = enumerate_usl_top(4);
  auto b = enumerate_usl_top(4);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i].same_order(b[i]));
  std::set<std::vector<std::uint64_t>> keys;
  for (const auto& u : a) CHECK(keys.insert(canonical_key(u)).second);
}

TEST_CASE("structure text round trip") {
  auto d = FiniteUslTop::diamond();
  auto text = format_usl(d, "d");
  auto back = parse_usl_string(text);
  REQUIRE(back.ok());
  CHECK(back->label == "d");
  CHECK(back->usl.same_order(d));
  CHECK(back->usl.names() == d.names());

  ParseError err;
  auto bad = parse_usl_string("usl x\nelements: a b\na < c\nend\n", &err);
  CHECK(!bad.ok());
}
