#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "husl/usl.hpp"

// First-order syntax over the signature {<=, +, 0, 1} together with a
// recursive-descent parser, prenexing to the two-block fragments, and
// quantifier-free evaluation in a finite USL-with-top.

namespace husl {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  enum class Kind { Zero, One, Var, Join } kind;
  std::string var;     // Kind::Var
  TermPtr left, right; // Kind::Join

  static TermPtr zero();
  static TermPtr one();
  static TermPtr mkvar(std::string name);
  static TermPtr mkjoin(TermPtr l, TermPtr r);
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { Leq, Eq, Not, And, Or, Implies, Exists, Forall } kind;
  TermPtr tl, tr;                  // atoms
  FormulaPtr fl, fr;               // connectives / quantifier body (fl)
  std::vector<std::string> vars;   // quantifiers

  static FormulaPtr leq(TermPtr l, TermPtr r);
  static FormulaPtr eq(TermPtr l, TermPtr r);
  static FormulaPtr mknot(FormulaPtr f);
  static FormulaPtr mkand(FormulaPtr l, FormulaPtr r);
  static FormulaPtr mkor(FormulaPtr l, FormulaPtr r);
  static FormulaPtr implies(FormulaPtr l, FormulaPtr r);
  static FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body);
  static FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body);
};

std::string to_string(const TermPtr& t);
std::string to_string(const FormulaPtr& f);

struct SyntaxError {
  int line = 1, column = 1;
  std::string message;
  bool empty() const { return message.empty(); }
};

// Grammar (see README): quantifiers scope to the end of the enclosing
// group; `!` > `&` > `\/` > `->` (right-assoc); `+` binds tighter than
// predicates. Sentences must be closed; unbound variables are an error.
Result<FormulaPtr> parse_sentence(const std::string& text, SyntaxError* err = nullptr);

struct PrenexSigma2 {
  std::vector<std::string> existential_vars;
  std::vector<std::string> universal_vars;
  FormulaPtr matrix;  // quantifier-free
};

struct PrenexPi2 {
  std::vector<std::string> universal_vars;
  std::vector<std::string> existential_vars;
  FormulaPtr matrix;
};

// Quantifier block of a general prenex form.
struct QuantBlock {
  bool is_exists;
  std::vector<std::string> vars;
};

struct PrenexForm {
  std::vector<QuantBlock> blocks;
  FormulaPtr matrix;
};

// Capture-avoiding prenex transformation. Variables are renamed apart
// deterministically (fresh names by first occurrence); independent blocks
// from the two sides of a connective are interleaved so as to minimize
// alternations, preferring `prefer_exists_first` for the leading block.
PrenexForm prenex(const FormulaPtr& sentence, bool prefer_exists_first);

// Succeeds iff the prenex of f has prefix exists*-forall*.
Result<PrenexSigma2> prenex_sigma2(const FormulaPtr& f);
// Dual: prefix forall*-exists*.
Result<PrenexPi2> prenex_pi2(const FormulaPtr& f);

using Env = std::map<std::string, ElementId>;

ElementId eval_term(const FiniteUslTop& v, const Env& env, const TermPtr& t);
bool eval_qf(const FiniteUslTop& v, const Env& env, const FormulaPtr& matrix);

// Free variables in order of first occurrence.
std::vector<std::string> free_vars(const FormulaPtr& f);

}  // namespace husl
