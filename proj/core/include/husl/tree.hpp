#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "husl/table.hpp"
#include "husl/usl.hpp"

// Finite-depth uniform trees over a representation prefix: strings of table
// maps, presented intensionally by a root together with per-level stem and
// tail data. Coding accounting, the bit decoding procedure, x-safe rewrites
// and split detection all operate on this presentation.
//
// A string entry at position j is a map index into the stage legal at j
// (stages extend each other as prefixes, so indices are stable); positions
// beyond the last stage clamp to it.

namespace husl {

struct UniformTreeSpec {
  RepPrefix rep;
  int depth = 0;
  std::vector<int> root;
  struct Level {
    std::vector<int> pi;                // shared stem
    std::vector<std::vector<int>> rho;  // one tail per map of the level's input stage
  };
  std::vector<Level> levels;  // levels.size() == depth
  // input position l draws from stage l + stage_offset (restricted trees
  // keep their original level alphabets this way)
  int stage_offset = 0;

  const UslTable& input_stage(int l) const { return rep.stage_at(stage_offset + l); }
};

// pi/rho arity and length discipline, leading-alpha clause, and the
// positional stage bounds for every entry.
Diagnostic validate_tree(const UniformTreeSpec& t);

// empty stems, single-entry tails: T(sigma) = sigma
UniformTreeSpec identity_tree(const RepPrefix& rep, int depth);

// T(sigma) = root + pi_0 + rho_{0,sigma(0)} + ...; DepthExceeded when sigma
// is longer than the declared depth.
Result<std::vector<int>> apply(const UniformTreeSpec& t, const std::vector<int>& sigma);

// re-root at T(sigma): T_sigma(tau) = T(sigma + tau)
Result<UniformTreeSpec> restrict_tree(const UniformTreeSpec& t, const std::vector<int>& sigma);

// replace the root's initial segment of |mu| positions by mu
Result<UniformTreeSpec> transfer_tree(const UniformTreeSpec& t, const std::vector<int>& mu);

// C-values inside pi + rho only at the fork position (the leading alpha)
TableReport check_branch_coding_free(const UniformTreeSpec& t);

// alpha =_x beta implies rho_{l,alpha} =_x rho_{l,beta} positionwise
TableReport check_congruence_respecting(const UniformTreeSpec& t);

// occurrences of g(x,y,0) and g(x,y,1) in the root
Result<int> root_coding_count(const UniformTreeSpec& t, ElementId x, ElementId y);

// true iff every qualifying pair codes equally often in both roots
Result<bool> no_more_root_coding(const UniformTreeSpec& s, const UniformTreeSpec& t);

// replace every C value by its fixed property-(4) escape for x
std::vector<int> x_safe(const RepPrefix& rep, const std::vector<int>& sigma, ElementId x);

// the path through an identity-style tree choosing g(x,y,bit) at successive
// positions; returned as the resulting tree string
Result<std::vector<int>> encode_bits(const UniformTreeSpec& t, ElementId x, ElementId y,
                                     const std::vector<int>& bits);

// scan for positions =_x g(x,y,0) whose value is =_y one of the two coding
// maps, emitting the corresponding bits
Result<std::vector<int>> decode_bits(const RepPrefix& rep, const std::vector<int>& prefix,
                                     ElementId x, ElementId y);

// q(n, sigma restricted to n) in {0,1}
using DecisionTable = std::function<int(int, const std::vector<int>&)>;

struct Split {
  std::vector<int> sigma, tau;
  int n = 0;
};

// same-length input-string pairs congruent mod y that q tells apart at some
// prefix length n
std::vector<Split> find_splits(const UniformTreeSpec& t, const DecisionTable& q, ElementId x,
                               ElementId y, int depth, size_t limit = 1000);

// finite-depth approximation of the no-split congruence set over the
// restriction of t to rho_prefix
std::vector<ElementId> sp_set(const UniformTreeSpec& t, const DecisionTable& q, ElementId x,
                              const std::vector<int>& rho_prefix, int depth);

}  // namespace husl
