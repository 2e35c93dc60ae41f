#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "husl/usl.hpp"

// USL tables: finite families of maps lattice -> N subject to the order,
// differentiation and join axioms, nested into sequential representation
// prefixes with meet/homogeneity interpolants and an optional coding
// apparatus. Builders are deterministic verified search; every output is
// re-checked by the definitional verifiers, which are independent code.

namespace husl {

using TableMap = std::vector<int>;  // one value per lattice element

struct UslTable {
  FiniteUslTop lattice;
  std::vector<TableMap> maps;

  // alpha =_x beta, the congruence at x
  bool eq_at(int a, int b, ElementId x) const { return maps[a][x] == maps[b][x]; }
  int find(const TableMap& m) const;  // index of an equal map, or -1
};

struct TableReport {
  struct Failure {
    std::string axiom;  // Order, Differentiation, Join, MeetInterpolant, ...
    ElementId x = -1, y = -1;
    int alpha = -1, beta = -1;
    std::string detail;
  };
  std::vector<Failure> failures;
  bool pass() const { return failures.empty(); }
  std::string summary() const;
};

// Per-axiom check of the table definition (zero map present, bot sent to 0,
// order, differentiation, join), first counterexample per axiom.
TableReport verify_table(const UslTable& t);

struct CodingApparatus {
  // indices into theta0's map list
  std::vector<int> coding_set;
  // (x, y, k) -> coding_set member, bijective; domain is all ordered pairs
  // with x join y = top, x,y != top
  std::map<std::tuple<ElementId, ElementId, int>, int> g;

  bool in_c(int map_index) const;
};

// For every x meet y = z and alpha,beta in inner with alpha =_z beta,
// confirms gamma0,gamma1,gamma2 in outer with
//   alpha =_x g0 =_y g1 =_x g2 =_y beta.
TableReport check_meet_interpolants(const UslTable& inner, const UslTable& outer);

// For all quadruples a0,a1,b0,b1 in inner with (for all x) a0 =_x a1 implying
// b0 =_x b1, finds gamma0,gamma1 in outer and congruence-preserving maps
// f,g,h: inner -> outer with f: a0,a1 -> b0,gamma1; g: a0,a1 -> gamma0,gamma1;
// h: a0,a1 -> gamma0,b1. With a coding apparatus, images of non-pinned maps
// must avoid the coding set (acceptability).
TableReport check_homogeneity_interpolants(const UslTable& inner, const UslTable& outer,
                                           const CodingApparatus* coding = nullptr);

struct RepPrefix {
  FiniteUslTop lattice;
  // theta[0..d]; each stage's map list extends the previous stage's list as
  // a prefix, so a map index is meaningful across stages
  std::vector<UslTable> theta;
  // theta_star[i] sits between theta[i] and theta[i+1]; empty when absent
  std::vector<UslTable> theta_star;
  std::optional<CodingApparatus> coding;

  int depth() const { return (int)theta.size() - 1; }
  // the stage whose maps are legal at tree-string position j (clamped)
  const UslTable& stage_at(int j) const;
};

// Nesting chain, per-stage table axioms, meet interpolants for theta[i] in
// theta_star[i] (or theta[i+1] when absent), homogeneity interpolants for
// theta_star[i] in theta[i+1].
TableReport verify_rep_prefix(const RepPrefix& r);

// Everything verify_rep_prefix checks plus coding properties (3) and (4),
// differentiation outside C, the g-bijection domain, and property (5) for
// every coatom.
TableReport verify_coding_ready(const RepPrefix& r);

// The fixed property-(4) escape: least beta in theta0 outside C with
// beta =_x the given coding map. -1 when none exists.
int escape_map(const RepPrefix& r, int coding_map, ElementId x);

struct TableCaps {
  int max_maps = 64;
  long long max_nodes = 10'000'000;
  double time_budget_seconds = 120.0;
};

// Deterministic iterative-deepening search on map count (values are
// canonical block labels, so the value range is bounded by the map count).
UslTable build_table(const FiniteUslTop& l, const TableCaps& caps = {});

// Stages theta0..theta_depth (starred stages when with_coding), passing the
// corresponding verifier. TooFewCoatoms when with_coding and |coatoms| < 2.
Result<RepPrefix> build_rep_prefix(const FiniteUslTop& l, int depth, bool with_coding,
                                   const TableCaps& caps = {});

}  // namespace husl
