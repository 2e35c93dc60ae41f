#include "husl/io.hpp"

#include <map>
#include <sstream>

namespace husl {

namespace {

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

Result<NamedUsl> fail(ParseError* err, int line, const std::string& msg) {
  if (err) *err = {line, msg};
  Result<NamedUsl> r;
  r.diag = {"ParseError", "line " + std::to_string(line) + ": " + msg, -1, -1, {}};
  return r;
}

}  // namespace

Result<NamedUsl> parse_usl(std::istream& in, ParseError* err) {
  std::string line;
  int lineno = 0;
  std::string label;
  std::vector<std::string> elems;
  std::map<std::string, int> index;
  int bot = -1, top = -1;
  std::vector<std::pair<int, int>> covers;
  bool saw_header = false, saw_end = false;

  while (std::getline(in, line)) {
    ++lineno;
    auto tk = tokens(line);
    if (tk.empty() || tk[0].starts_with("#")) continue;
    if (!saw_header) {
      if (tk[0] != "usl" || tk.size() != 2) return fail(err, lineno, "expected `usl <name>`");
      label = tk[1];
      saw_header = true;
      continue;
    }
    if (tk[0] == "elements:") {
      for (size_t i = 1; i < tk.size(); ++i) {
        if (index.count(tk[i])) return fail(err, lineno, "duplicate element " + tk[i]);
        index[tk[i]] = elems.size();
        elems.push_back(tk[i]);
      }
      if (elems.empty()) return fail(err, lineno, "empty element list");
      // default convention: first is bot, last is top
      bot = 0;
      top = elems.size() - 1;
    } else if (tk[0] == "bot:") {
      if (tk.size() != 2 || !index.count(tk[1])) return fail(err, lineno, "bad bot line");
      bot = index[tk[1]];
    } else if (tk[0] == "top:") {
      if (tk.size() != 2 || !index.count(tk[1])) return fail(err, lineno, "bad top line");
      top = index[tk[1]];
    } else if (tk[0] == "end") {
      saw_end = true;
      break;
    } else if (tk.size() == 3 && tk[1] == "<") {
      if (!index.count(tk[0])) return fail(err, lineno, "unknown element " + tk[0]);
      if (!index.count(tk[2])) return fail(err, lineno, "unknown element " + tk[2]);
      covers.emplace_back(index[tk[0]], index[tk[2]]);
    } else {
      return fail(err, lineno, "unrecognized line");
    }
  }
  if (!saw_header) return fail(err, lineno, "missing `usl` header");
  if (!saw_end) return fail(err, lineno, "missing `end`");
  if (elems.empty()) return fail(err, lineno, "missing `elements:` line");
  if ((int)elems.size() > 64) return fail(err, lineno, "too many elements (limit 64)");

  auto r = FiniteUslTop::from_covers(elems.size(), covers, bot, top, elems);
  if (!r.ok()) {
    if (err) *err = {lineno, r.diag.code + ": " + r.diag.message};
    Result<NamedUsl> out;
    out.diag = r.diag;
    return out;
  }
  Result<NamedUsl> out;
  out.value = NamedUsl{label, std::move(*r)};
  return out;
}

Result<NamedUsl> parse_usl_string(const std::string& text, ParseError* err) {
  std::istringstream ss(text);
  return parse_usl(ss, err);
}

std::string format_usl(const FiniteUslTop& u, const std::string& label) {
  std::ostringstream out;
  out << "usl " << label << "\n";
  out << "elements:";
  for (ElementId x = 0; x < u.size(); ++x) out << " " << u.name(x);
  out << "\n";
  out << "bot: " << u.name(u.bot()) << "\n";
  out << "top: " << u.name(u.top()) << "\n";
  for (ElementId x = 0; x < u.size(); ++x)
    for (ElementId y = 0; y < u.size(); ++y) {
      if (x == y || !u.leq(x, y)) continue;
      bool cover = true;
      for (ElementId z = 0; z < u.size() && cover; ++z)
        if (z != x && z != y && u.leq(x, z) && u.leq(z, y)) cover = false;
      if (cover) out << u.name(x) << " < " << u.name(y) << "\n";
    }
  out << "end\n";
  return out.str();
}

}  // namespace husl
