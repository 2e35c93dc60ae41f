#include "husl/sentence.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace husl {

TermPtr Term::zero() { return std::make_shared<Term>(Term{Kind::Zero, {}, nullptr, nullptr}); }
TermPtr Term::one() { return std::make_shared<Term>(Term{Kind::One, {}, nullptr, nullptr}); }
TermPtr Term::mkvar(std::string name) {
  return std::make_shared<Term>(Term{Kind::Var, std::move(name), nullptr, nullptr});
}
TermPtr Term::mkjoin(TermPtr l, TermPtr r) {
  return std::make_shared<Term>(Term{Kind::Join, {}, std::move(l), std::move(r)});
}

FormulaPtr Formula::leq(TermPtr l, TermPtr r) {
  return std::make_shared<Formula>(Formula{Kind::Leq, std::move(l), std::move(r), nullptr, nullptr, {}});
}
FormulaPtr Formula::eq(TermPtr l, TermPtr r) {
  return std::make_shared<Formula>(Formula{Kind::Eq, std::move(l), std::move(r), nullptr, nullptr, {}});
}
FormulaPtr Formula::mknot(FormulaPtr f) {
  return std::make_shared<Formula>(Formula{Kind::Not, nullptr, nullptr, std::move(f), nullptr, {}});
}
FormulaPtr Formula::mkand(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(Formula{Kind::And, nullptr, nullptr, std::move(l), std::move(r), {}});
}
FormulaPtr Formula::mkor(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(Formula{Kind::Or, nullptr, nullptr, std::move(l), std::move(r), {}});
}
FormulaPtr Formula::implies(FormulaPtr l, FormulaPtr r) {
  return std::make_shared<Formula>(Formula{Kind::Implies, nullptr, nullptr, std::move(l), std::move(r), {}});
}
FormulaPtr Formula::exists(std::vector<std::string> vars, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Kind::Exists, nullptr, nullptr, std::move(body), nullptr, std::move(vars)});
}
FormulaPtr Formula::forall(std::vector<std::string> vars, FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Kind::Forall, nullptr, nullptr, std::move(body), nullptr, std::move(vars)});
}

std::string to_string(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Zero: return "0";
    case Term::Kind::One: return "1";
    case Term::Kind::Var: return t->var;
    case Term::Kind::Join: {
      auto wrap = [](const TermPtr& s) {
        // + is left-associative; parenthesize a right-nested join
        return s->kind == Term::Kind::Join ? "(" + to_string(s) + ")" : to_string(s);
      };
      return to_string(t->left) + " + " + wrap(t->right);
    }
  }
  return "?";
}

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    default: return 4;
  }
}

std::string fmt(const FormulaPtr& f, int outer) {
  std::string s;
  int p = precedence(f->kind);
  switch (f->kind) {
    case Formula::Kind::Leq: s = to_string(f->tl) + " <= " + to_string(f->tr); break;
    case Formula::Kind::Eq: s = to_string(f->tl) + " = " + to_string(f->tr); break;
    case Formula::Kind::Not: {
      const auto& b = f->fl;
      bool atom = b->kind == Formula::Kind::Leq || b->kind == Formula::Kind::Eq ||
                  b->kind == Formula::Kind::Not;
      s = "!" + (atom ? "(" + fmt(b, 0) + ")" : fmt(b, p));
      break;
    }
    case Formula::Kind::And: s = fmt(f->fl, p) + " & " + fmt(f->fr, p); break;
    case Formula::Kind::Or: s = fmt(f->fl, p) + " \\/ " + fmt(f->fr, p); break;
    case Formula::Kind::Implies: s = fmt(f->fl, p + 1) + " -> " + fmt(f->fr, p); break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      s = f->kind == Formula::Kind::Exists ? "exists" : "forall";
      for (const auto& v : f->vars) s += " " + v;
      s += " . " + fmt(f->fl, 0);
      p = 0;
      break;
    }
  }
  if (p < outer) s = "(" + s + ")";
  return s;
}

}  // namespace

std::string to_string(const FormulaPtr& f) { return fmt(f, 0); }

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class Kind { Ident, Exists, Forall, Zero, One, Leq, Eq, Not, And, Or, Implies,
                    Plus, LParen, RParen, Dot, End } kind;
  std::string text;
  int line, column;
};

struct Lexer {
  std::vector<Token> toks;
  SyntaxError err;

  bool run(const std::string& text) {
    int line = 1, col = 1;
    size_t i = 0;
    auto push = [&](Token::Kind k, std::string t) {
      toks.push_back({k, std::move(t), line, col});
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') { ++line; col = 1; ++i; continue; }
      if (std::isspace((unsigned char)c)) { ++col; ++i; continue; }
      if (c == '0') { push(Token::Kind::Zero, "0"); ++i; ++col; continue; }
      if (c == '1') { push(Token::Kind::One, "1"); ++i; ++col; continue; }
      if (std::islower((unsigned char)c)) {
        size_t j = i;
        while (j < text.size() && (std::islower((unsigned char)text[j]) ||
                                   std::isdigit((unsigned char)text[j]) || text[j] == '_'))
          ++j;
        std::string word = text.substr(i, j - i);
        if (word == "exists") push(Token::Kind::Exists, word);
        else if (word == "forall") push(Token::Kind::Forall, word);
        else push(Token::Kind::Ident, word);
        col += j - i;
        i = j;
        continue;
      }
      auto two = text.substr(i, 2);
      if (two == "<=") { push(Token::Kind::Leq, two); i += 2; col += 2; continue; }
      if (two == "->") { push(Token::Kind::Implies, two); i += 2; col += 2; continue; }
      if (two == "\\/") { push(Token::Kind::Or, two); i += 2; col += 2; continue; }
      switch (c) {
        case '=': push(Token::Kind::Eq, "="); break;
        case '!': push(Token::Kind::Not, "!"); break;
        case '&': push(Token::Kind::And, "&"); break;
        case '+': push(Token::Kind::Plus, "+"); break;
        case '(': push(Token::Kind::LParen, "("); break;
        case ')': push(Token::Kind::RParen, ")"); break;
        case '.': push(Token::Kind::Dot, "."); break;
        default:
          err = {line, col, std::string("unexpected character `") + c + "`"};
          return false;
      }
      ++i;
      ++col;
    }
    toks.push_back({Token::Kind::End, "", line, col});
    return true;
  }
};

struct Parser {
  const std::vector<Token>& toks;
  size_t pos = 0;
  SyntaxError err;

  const Token& peek() const { return toks[pos]; }
  bool at(Token::Kind k) const { return toks[pos].kind == k; }
  bool eat(Token::Kind k) {
    if (at(k)) { ++pos; return true; }
    return false;
  }
  FormulaPtr failf(const std::string& msg) {
    if (err.empty()) err = {peek().line, peek().column, msg};
    return nullptr;
  }
  TermPtr failt(const std::string& msg) {
    if (err.empty()) err = {peek().line, peek().column, msg};
    return nullptr;
  }

  TermPtr term() {
    TermPtr t = factor();
    if (!t) return nullptr;
    while (eat(Token::Kind::Plus)) {
      TermPtr r = factor();
      if (!r) return failt("expected term after `+`");
      t = Term::mkjoin(t, r);
    }
    return t;
  }

  TermPtr factor() {
    if (eat(Token::Kind::Zero)) return Term::zero();
    if (eat(Token::Kind::One)) return Term::one();
    if (at(Token::Kind::Ident)) {
      auto name = peek().text;
      ++pos;
      return Term::mkvar(name);
    }
    if (eat(Token::Kind::LParen)) {
      TermPtr t = term();
      if (!t) return nullptr;
      if (!eat(Token::Kind::RParen)) return failt("expected `)` in term");
      return t;
    }
    return failt("expected term");
  }

  FormulaPtr atom() {
    TermPtr l = term();
    if (!l) return nullptr;
    if (eat(Token::Kind::Leq)) {
      TermPtr r = term();
      if (!r) return failf("expected term after `<=`");
      return Formula::leq(l, r);
    }
    if (eat(Token::Kind::Eq)) {
      TermPtr r = term();
      if (!r) return failf("expected term after `=`");
      return Formula::eq(l, r);
    }
    return failf("expected `<=` or `=`");
  }

  FormulaPtr primary() {
    if (at(Token::Kind::Exists) || at(Token::Kind::Forall)) {
      bool ex = at(Token::Kind::Exists);
      ++pos;
      std::vector<std::string> vars;
      while (at(Token::Kind::Ident)) {
        vars.push_back(peek().text);
        ++pos;
      }
      if (vars.empty()) return failf("expected variable after quantifier");
      if (!eat(Token::Kind::Dot)) return failf("expected `.` after quantified variables");
      FormulaPtr body = formula();  // scopes to end of enclosing group
      if (!body) return nullptr;
      return ex ? Formula::exists(std::move(vars), body) : Formula::forall(std::move(vars), body);
    }
    if (at(Token::Kind::LParen)) {
      // `(` may open a term or a formula group; try the atom first
      size_t save = pos;
      SyntaxError saved_err = err;
      FormulaPtr a = atom();
      if (a) return a;
      pos = save;
      err = saved_err;
      eat(Token::Kind::LParen);
      FormulaPtr f = formula();
      if (!f) return nullptr;
      if (!eat(Token::Kind::RParen)) return failf("expected `)`");
      return f;
    }
    return atom();
  }

  FormulaPtr unary() {
    if (eat(Token::Kind::Not)) {
      FormulaPtr f = unary();
      if (!f) return nullptr;
      return Formula::mknot(f);
    }
    return primary();
  }

  FormulaPtr conj() {
    FormulaPtr f = unary();
    if (!f) return nullptr;
    while (eat(Token::Kind::And)) {
      FormulaPtr r = unary();
      if (!r) return failf("expected formula after `&`");
      f = Formula::mkand(f, r);
    }
    return f;
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    if (!f) return nullptr;
    while (eat(Token::Kind::Or)) {
      FormulaPtr r = conj();
      if (!r) return failf("expected formula after `\\/`");
      f = Formula::mkor(f, r);
    }
    return f;
  }

  FormulaPtr formula() {
    FormulaPtr f = disj();
    if (!f) return nullptr;
    if (eat(Token::Kind::Implies)) {
      FormulaPtr r = formula();  // right-associative
      if (!r) return failf("expected formula after `->`");
      return Formula::implies(f, r);
    }
    return f;
  }
};

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::vector<std::string>& out, std::set<std::string>& seen) {
  auto term_vars = [&](const TermPtr& t, auto&& self) -> void {
    if (!t) return;
    if (t->kind == Term::Kind::Var) {
      if (!bound.count(t->var) && !seen.count(t->var)) {
        seen.insert(t->var);
        out.push_back(t->var);
      }
      return;
    }
    self(t->left, self);
    self(t->right, self);
  };
  switch (f->kind) {
    case Formula::Kind::Leq:
    case Formula::Kind::Eq:
      term_vars(f->tl, term_vars);
      term_vars(f->tr, term_vars);
      break;
    case Formula::Kind::Not:
      collect_free(f->fl, bound, out, seen);
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect_free(f->fl, bound, out, seen);
      collect_free(f->fr, bound, out, seen);
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::vector<std::string> added;
      for (const auto& v : f->vars)
        if (bound.insert(v).second) added.push_back(v);
      collect_free(f->fl, bound, out, seen);
      for (const auto& v : added) bound.erase(v);
      break;
    }
  }
}

}  // namespace

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> bound, seen;
  std::vector<std::string> out;
  collect_free(f, bound, out, seen);
  return out;
}

Result<FormulaPtr> parse_sentence(const std::string& text, SyntaxError* err) {
  Result<FormulaPtr> res;
  Lexer lex;
  if (!lex.run(text)) {
    if (err) *err = lex.err;
    res.diag = {"SyntaxError", std::to_string(lex.err.line) + ":" + std::to_string(lex.err.column) +
                                   ": " + lex.err.message, -1, -1, {}};
    return res;
  }
  Parser p{lex.toks};
  FormulaPtr f = p.formula();
  if (f && !p.at(Token::Kind::End)) {
    f = nullptr;
    p.err = {p.peek().line, p.peek().column, "unexpected trailing input"};
  }
  if (!f) {
    if (err) *err = p.err;
    res.diag = {"SyntaxError", std::to_string(p.err.line) + ":" + std::to_string(p.err.column) +
                                   ": " + p.err.message, -1, -1, {}};
    return res;
  }
  auto fv = free_vars(f);
  if (!fv.empty()) {
    if (err) *err = {1, 1, "unbound variable " + fv.front()};
    res.diag = {"UnboundVariable", "unbound variable " + fv.front(), -1, -1, {}};
    return res;
  }
  res.value = f;
  return res;
}

// ---------------------------------------------------------------------------
// Prenexing

namespace {

TermPtr rename_term(const TermPtr& t, const std::map<std::string, std::string>& env) {
  switch (t->kind) {
    case Term::Kind::Zero:
    case Term::Kind::One: return t;
    case Term::Kind::Var: {
      auto it = env.find(t->var);
      return it == env.end() ? t : Term::mkvar(it->second);
    }
    case Term::Kind::Join:
      return Term::mkjoin(rename_term(t->left, env), rename_term(t->right, env));
  }
  return t;
}

// Negation normal form with capture-avoiding renaming. Quantified variables
// get deterministic fresh names in traversal order: the original name if
// still unused, else name_2, name_3, ...
FormulaPtr nnf(const FormulaPtr& f, bool positive, std::map<std::string, std::string> env,
               std::set<std::string>& used) {
  switch (f->kind) {
    case Formula::Kind::Leq: {
      auto a = Formula::leq(rename_term(f->tl, env), rename_term(f->tr, env));
      return positive ? a : Formula::mknot(a);
    }
    case Formula::Kind::Eq: {
      auto a = Formula::eq(rename_term(f->tl, env), rename_term(f->tr, env));
      return positive ? a : Formula::mknot(a);
    }
    case Formula::Kind::Not:
      return nnf(f->fl, !positive, std::move(env), used);
    case Formula::Kind::And: {
      auto l = nnf(f->fl, positive, env, used);
      auto r = nnf(f->fr, positive, env, used);
      return positive ? Formula::mkand(l, r) : Formula::mkor(l, r);
    }
    case Formula::Kind::Or: {
      auto l = nnf(f->fl, positive, env, used);
      auto r = nnf(f->fr, positive, env, used);
      return positive ? Formula::mkor(l, r) : Formula::mkand(l, r);
    }
    case Formula::Kind::Implies: {
      auto l = nnf(f->fl, !positive, env, used);
      auto r = nnf(f->fr, positive, env, used);
      return positive ? Formula::mkor(l, r) : Formula::mkand(l, r);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool ex = (f->kind == Formula::Kind::Exists) == positive;
      std::vector<std::string> fresh;
      for (const auto& v : f->vars) {
        std::string name = v;
        for (int i = 2; used.count(name); ++i) name = v + "_" + std::to_string(i);
        used.insert(name);
        env[v] = name;
        fresh.push_back(name);
      }
      auto body = nnf(f->fl, positive, env, used);
      return ex ? Formula::exists(std::move(fresh), body)
                : Formula::forall(std::move(fresh), body);
    }
  }
  return f;
}

std::vector<QuantBlock> merge_blocks(const std::vector<QuantBlock>& a,
                                     const std::vector<QuantBlock>& b, bool prefer_exists) {
  std::vector<QuantBlock> out;
  size_t i = 0, j = 0;
  bool cur;
  if (i < a.size() || j < b.size()) {
    bool head_pref = (i < a.size() && a[i].is_exists == prefer_exists) ||
                     (j < b.size() && b[j].is_exists == prefer_exists);
    cur = head_pref ? prefer_exists : !prefer_exists;
  } else {
    return out;
  }
  while (i < a.size() || j < b.size()) {
    QuantBlock blk{cur, {}};
    while (i < a.size() && a[i].is_exists == cur) {
      blk.vars.insert(blk.vars.end(), a[i].vars.begin(), a[i].vars.end());
      ++i;
    }
    while (j < b.size() && b[j].is_exists == cur) {
      blk.vars.insert(blk.vars.end(), b[j].vars.begin(), b[j].vars.end());
      ++j;
    }
    if (!blk.vars.empty()) out.push_back(std::move(blk));
    cur = !cur;
  }
  return out;
}

PrenexForm pull(const FormulaPtr& f, bool prefer_exists) {
  switch (f->kind) {
    case Formula::Kind::Leq:
    case Formula::Kind::Eq:
    case Formula::Kind::Not:
      return {{}, f};
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      auto l = pull(f->fl, prefer_exists);
      auto r = pull(f->fr, prefer_exists);
      auto matrix = f->kind == Formula::Kind::And ? Formula::mkand(l.matrix, r.matrix)
                                                  : Formula::mkor(l.matrix, r.matrix);
      return {merge_blocks(l.blocks, r.blocks, prefer_exists), matrix};
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      bool ex = f->kind == Formula::Kind::Exists;
      auto inner = pull(f->fl, prefer_exists);
      std::vector<QuantBlock> blocks;
      if (!inner.blocks.empty() && inner.blocks.front().is_exists == ex) {
        blocks = inner.blocks;
        blocks.front().vars.insert(blocks.front().vars.begin(), f->vars.begin(), f->vars.end());
      } else {
        blocks.push_back({ex, f->vars});
        blocks.insert(blocks.end(), inner.blocks.begin(), inner.blocks.end());
      }
      return {std::move(blocks), inner.matrix};
    }
    case Formula::Kind::Implies:
      // eliminated by nnf
      break;
  }
  return {{}, f};
}

std::string prefix_string(const std::vector<QuantBlock>& blocks) {
  std::string s;
  for (const auto& b : blocks) {
    s += b.is_exists ? "exists" : "forall";
    for (const auto& v : b.vars) s += " " + v;
    s += " . ";
  }
  return s;
}

}  // namespace

PrenexForm prenex(const FormulaPtr& sentence, bool prefer_exists_first) {
  std::set<std::string> used;
  auto n = nnf(sentence, true, {}, used);
  return pull(n, prefer_exists_first);
}

Result<PrenexSigma2> prenex_sigma2(const FormulaPtr& f) {
  Result<PrenexSigma2> res;
  auto p = prenex(f, true);
  PrenexSigma2 s;
  s.matrix = p.matrix;
  bool ok = true;
  if (p.blocks.size() > 2) ok = false;
  else if (p.blocks.size() == 2) {
    ok = p.blocks[0].is_exists && !p.blocks[1].is_exists;
    if (ok) {
      s.existential_vars = p.blocks[0].vars;
      s.universal_vars = p.blocks[1].vars;
    }
  } else if (p.blocks.size() == 1) {
    if (p.blocks[0].is_exists) s.existential_vars = p.blocks[0].vars;
    else s.universal_vars = p.blocks[0].vars;
  }
  if (!ok) {
    res.diag = {"NotSigma2", "prenex prefix is not exists*-forall*: " + prefix_string(p.blocks),
                -1, -1, {}};
    return res;
  }
  res.value = std::move(s);
  return res;
}

Result<PrenexPi2> prenex_pi2(const FormulaPtr& f) {
  Result<PrenexPi2> res;
  auto p = prenex(f, false);
  PrenexPi2 s;
  s.matrix = p.matrix;
  bool ok = true;
  if (p.blocks.size() > 2) ok = false;
  else if (p.blocks.size() == 2) {
    ok = !p.blocks[0].is_exists && p.blocks[1].is_exists;
    if (ok) {
      s.universal_vars = p.blocks[0].vars;
      s.existential_vars = p.blocks[1].vars;
    }
  } else if (p.blocks.size() == 1) {
    if (p.blocks[0].is_exists) s.existential_vars = p.blocks[0].vars;
    else s.universal_vars = p.blocks[0].vars;
  }
  if (!ok) {
    res.diag = {"NotPi2", "prenex prefix is not forall*-exists*: " + prefix_string(p.blocks),
                -1, -1, {}};
    return res;
  }
  res.value = std::move(s);
  return res;
}

// ---------------------------------------------------------------------------
// Evaluation

ElementId eval_term(const FiniteUslTop& v, const Env& env, const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Zero: return v.bot();
    case Term::Kind::One: return v.top();
    case Term::Kind::Var: return env.at(t->var);
    case Term::Kind::Join: return v.join(eval_term(v, env, t->left), eval_term(v, env, t->right));
  }
  return v.bot();
}

bool eval_qf(const FiniteUslTop& v, const Env& env, const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Leq: return v.leq(eval_term(v, env, f->tl), eval_term(v, env, f->tr));
    case Formula::Kind::Eq: return eval_term(v, env, f->tl) == eval_term(v, env, f->tr);
    case Formula::Kind::Not: return !eval_qf(v, env, f->fl);
    case Formula::Kind::And: return eval_qf(v, env, f->fl) && eval_qf(v, env, f->fr);
    case Formula::Kind::Or: return eval_qf(v, env, f->fl) || eval_qf(v, env, f->fr);
    case Formula::Kind::Implies: return !eval_qf(v, env, f->fl) || eval_qf(v, env, f->fr);
    case Formula::Kind::Exists:
    case Formula::Kind::Forall:
      break;  // not quantifier-free; callers guarantee this does not happen
  }
  return false;
}

}  // namespace husl
