#pragma once

#include <optional>
#include <vector>

#include "husl/sentence.hpp"
#include "husl/usl.hpp"

// Truth of two-quantifier-block sentences over the hyperarithmetic degrees
// below Kleene's O, via the finite reduction: an exists*-forall* sentence
// holds iff some finitely generated witness structure has every
// almost-end-extension generated by the universal tuple satisfying the
// matrix.

namespace husl {

struct RunCaps {
  int max_exists = 3;
  int max_forall = 2;
  int max_witness_size = 9;        // |U|
  int max_extension_size = 36;     // |V|
  long long max_congruence_states = 500'000;
  double time_budget_seconds = 60.0;
};

struct WitnessStructure {
  FiniteUslTop u;
  std::vector<ElementId> assignment;  // one element per existential variable
};

// Every USL-with-top generated by m elements (plus bot and top), together
// with the generating assignment, one pair per assignment-preserving
// isomorphism class. Deterministic order.
std::vector<WitnessStructure> enumerate_witness_structures(int m, const RunCaps& caps = {});

struct AeeExtension {
  FiniteUslTop v;
  std::vector<ElementId> inclusion;   // u element -> v element
  std::vector<ElementId> assignment;  // one element per universal variable
};

// Every almost-end-extension of u generated over u by k elements, with the
// generating assignment, deduplicated up to isomorphisms fixing u pointwise
// and preserving the assignment. Realized as join-congruence quotients of
// the free extension u[y_1..y_k].
std::vector<AeeExtension> enumerate_aee_extensions(const FiniteUslTop& u, int k,
                                                   const RunCaps& caps = {});

// Memoized by canonical structure; u must be a structure as produced by
// enumerate_witness_structures / canonical_form for hits to be shared.
const std::vector<AeeExtension>& enumerate_aee_extensions_cached(const FiniteUslTop& u, int k,
                                                                 const RunCaps& caps = {});

// True iff at least one candidate is an almost-end-extension. Each
// candidate's small structure must equal u.
bool decide_question1(const FiniteUslTop& u, const std::vector<SubstructureWitness>& candidates);

enum class Verdict { True, False, Unknown };

struct ModelInstance {
  FiniteUslTop structure;
  Env env;
  bool matrix_value = false;
};

struct CandidateRecord {
  FiniteUslTop u;
  Env x_env;
  std::optional<ModelInstance> extension;  // countermodel / realization over u
  std::vector<ElementId> inclusion;        // u -> extension structure
};

struct Sigma2Certificate {
  Verdict verdict = Verdict::Unknown;
  std::string note;
  FormulaPtr matrix;
  std::vector<std::string> existential_vars, universal_vars;
  std::optional<CandidateRecord> witness;   // verdict True
  std::vector<CandidateRecord> refutations; // verdict False: one per candidate
};

struct Pi2Certificate {
  Verdict verdict = Verdict::Unknown;
  std::string note;
  FormulaPtr matrix;
  std::vector<std::string> universal_vars, existential_vars;
  std::optional<CandidateRecord> refutation;   // verdict False
  std::vector<CandidateRecord> realizations;   // verdict True: one per candidate
};

Sigma2Certificate decide_sigma2(const PrenexSigma2& s, const RunCaps& caps = {});
Pi2Certificate decide_pi2(const PrenexPi2& s, const RunCaps& caps = {});

// Re-evaluates every recorded instance; true iff all recorded truth values
// reproduce.
bool check_certificate(const Sigma2Certificate& c);
bool check_certificate(const Pi2Certificate& c);

}  // namespace husl
