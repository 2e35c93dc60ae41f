#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

// Finite upper semilattices with least and greatest element (USL-with-top).
// The order relation is the single source of truth; joins and meets are
// derived from it and cached at construction time.

namespace husl {

using ElementId = int;

struct Diagnostic {
  std::string code;     // NotPartialOrder, NoJoin, BotNotLeast, TopNotGreatest, ...
  std::string message;
  ElementId x = -1;
  ElementId y = -1;
  std::vector<ElementId> witnesses;  // e.g. minimal upper bounds for NoJoin

  bool empty() const { return code.empty(); }
};

template <class T>
struct Result {
  std::optional<T> value;
  Diagnostic diag;

  bool ok() const { return value.has_value(); }
  const T& operator*() const { return *value; }
  T& operator*() { return *value; }
  const T* operator->() const { return &*value; }
};

struct CapExceeded {
  std::string what;
};

class FiniteUslTop {
 public:
  FiniteUslTop() = default;

  int size() const { return n_; }
  ElementId bot() const { return bot_; }
  ElementId top() const { return top_; }

  bool leq(ElementId x, ElementId y) const { return (up_[x] >> y) & 1u; }
  bool lt(ElementId x, ElementId y) const { return x != y && leq(x, y); }

  ElementId join(ElementId x, ElementId y) const { return join_[x][y]; }

  // Derived meet: the join of all common lower bounds. Coincides with the
  // greatest lower bound, which always exists in a finite USL-with-top.
  ElementId meet(ElementId x, ElementId y) const;

  std::vector<ElementId> coatoms() const;

  const std::string& name(ElementId x) const { return names_[x]; }
  const std::vector<std::string>& names() const { return names_; }
  void rename(std::vector<std::string> names) { names_ = std::move(names); }

  // Row bitmask: bit j set iff x <= j.
  std::uint64_t up_mask(ElementId x) const { return up_[x]; }

  bool same_order(const FiniteUslTop& other) const {
    return n_ == other.n_ && bot_ == other.bot_ && top_ == other.top_ &&
           up_ == other.up_;
  }

  // Constructs and fully validates. `up` holds the reflexive order relation
  // as row bitmasks. On failure the diagnostic names the first violated
  // axiom and a witnessing pair.
  static Result<FiniteUslTop> validate(int size, const std::vector<std::uint64_t>& up,
                                       ElementId bot, ElementId top,
                                       std::vector<std::string> names = {});

  // Reflexive-transitive closure of cover pairs, then validate.
  static Result<FiniteUslTop> from_covers(int size,
                                          const std::vector<std::pair<ElementId, ElementId>>& less,
                                          ElementId bot, ElementId top,
                                          std::vector<std::string> names = {});

  static FiniteUslTop singleton();
  static FiniteUslTop chain(int n);  // 0 < 1 < ... < n-1
  static FiniteUslTop diamond();     // 0 < a,b < 1

 private:
  int n_ = 0;
  ElementId bot_ = 0, top_ = 0;
  std::vector<std::uint64_t> up_;
  std::vector<std::vector<ElementId>> join_;
  std::vector<std::string> names_;
};

struct SubstructureWitness {
  FiniteUslTop small;
  FiniteUslTop big;
  std::vector<ElementId> inclusion;  // small element -> big element
};

// Checks the SubstructureWitness invariants: injectivity, order preserved in
// both directions, join preserved, bot->bot and top->top.
Diagnostic check_substructure(const SubstructureWitness& w);

// True iff no element of big outside the image sits below a non-top image
// element.
bool is_almost_end_extension(const SubstructureWitness& w);

// Smallest join-closed subset containing seed plus bot and top, as a
// structure with its inclusion map.
SubstructureWitness generated_substructure(const FiniteUslTop& big,
                                           const std::vector<ElementId>& seed);

// Bijection preserving order, bot and top, if any; lexicographically least
// as a mapping vector. Identity-sized permutation search.
std::optional<std::vector<ElementId>> find_isomorphism(const FiniteUslTop& u,
                                                       const FiniteUslTop& v);

// All isomorphisms u -> u (bot/top fixed), in lexicographic order.
std::vector<std::vector<ElementId>> automorphisms(const FiniteUslTop& u);

// Minimal adjacency encoding over relabelings fixing bot as index 0 and top
// as the last index. Equal keys iff isomorphic.
std::vector<std::uint64_t> canonical_key(const FiniteUslTop& u);

// Relabels to the canonical form behind canonical_key.
FiniteUslTop canonical_form(const FiniteUslTop& u);

}  // namespace husl
