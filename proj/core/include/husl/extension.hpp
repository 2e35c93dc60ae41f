#pragma once

#include <optional>
#include <string>
#include <vector>

#include "husl/usl.hpp"

// Top-preserving free extensions, simple extensions, and the decomposition
// of an arbitrary almost-end-extension as a simple almost-end-extension of
// a free extension, built exactly as in the underlying existence proof and
// re-verified mechanically.

namespace husl {

struct FreeExtension {
  FiniteUslTop base;
  std::vector<std::string> generators;
  FiniteUslTop result;
  std::vector<ElementId> embedding;  // base element -> result element
  // result element -> (base element, generator subset bitmask); top is
  // (base top, 0) by convention
  std::vector<std::pair<ElementId, std::uint32_t>> decode;
  // lookup: element_of(u, S) for u != base top
  ElementId element_of(ElementId base_elem, std::uint32_t gen_mask) const;
  ElementId generator_element(int i) const;  // (bot, {x_i})
};

// The structure with universe ((U \ {top}) x P(X)) u {top}; X must be
// disjoint from U's element names.
FreeExtension free_extend(const FiniteUslTop& u, const std::vector<std::string>& gen_names);

// Some w generating all of w.big over the inclusion image, least index, or
// nullopt.
std::optional<ElementId> is_simple_extension(const SubstructureWitness& w);

struct EmbeddingReport {
  bool injective = true, join_preserved = true, bot_preserved = true, top_preserved = true,
       order_preserved = true;
  std::string detail;
  bool ok() const {
    return injective && join_preserved && bot_preserved && top_preserved && order_preserved;
  }
};

EmbeddingReport verify_embedding(const std::vector<ElementId>& f, const FiniteUslTop& source,
                                 const FiniteUslTop& target);

struct DecompositionWitness {
  FiniteUslTop u, v;
  std::vector<ElementId> inclusion;       // u -> v (the input pair)
  std::vector<std::string> fresh_names;   // one per v-outside-u element
  FreeExtension u1;                       // u[A]
  std::vector<ElementId> h;               // u1.result -> v, the collapsing homomorphism
  FreeExtension u2prime;                  // u1[{b}]
  std::vector<int> congruence;            // class id per u2prime element
  FiniteUslTop u2;                        // quotient
  std::vector<ElementId> u1_into_u2;      // class of (x, empty)
  std::vector<ElementId> f;               // v -> u2, the extending embedding
};

struct DecompositionError {
  std::string code;  // NotAlmostEndExtension or an invariant name
  std::string message;
};

// Builds (U1, h, U2, f) from an almost-end-extension pair and verifies all
// witness invariants before returning.
Result<DecompositionWitness> decompose(const SubstructureWitness& pair);

// Quotient of a structure by a join-congruence given as class ids; classes
// are named by their least member. The congruence must be join-compatible.
FiniteUslTop quotient_by_congruence(const FiniteUslTop& u, const std::vector<int>& class_of);

// Join-congruence test: y1 ~ y1' and y2 ~ y2' implies y1 v y2 ~ y1' v y2',
// plus the equivalence-relation shape of class_of.
bool is_join_congruence(const FiniteUslTop& u, const std::vector<int>& class_of);

}  // namespace husl
