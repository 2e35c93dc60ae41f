#include "husl/serialize.hpp"

#include <sstream>

#include <json.hpp>

#include "husl/sentence.hpp"

namespace husl {

namespace {

using nlohmann::json;

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

// next non-blank, non-comment line; false at end of stream
bool next_line(std::istream& in, int& lineno, std::vector<std::string>& tk, std::string& raw) {
  while (std::getline(in, raw)) {
    ++lineno;
    tk = tokens(raw);
    if (!tk.empty() && !tk[0].starts_with("#")) return true;
  }
  return false;
}

template <class T>
Result<T> fail(ParseError* err, int line, const std::string& msg) {
  if (err) *err = {line, msg};
  Result<T> r;
  r.diag = {"ParseError", "line " + std::to_string(line) + ": " + msg};
  return r;
}

int element_by_name(const FiniteUslTop& u, const std::string& name) {
  for (ElementId x = 0; x < u.size(); ++x)
    if (u.name(x) == name) return x;
  return -1;
}

// `(x,y,k)` with element names
bool parse_g_key(const std::string& s, const FiniteUslTop& l,
                 std::tuple<ElementId, ElementId, int>& out) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return false;
  std::string body = s.substr(1, s.size() - 2);
  std::vector<std::string> parts;
  std::string cur;
  for (char c : body) {
    if (c == ',') { parts.push_back(cur); cur.clear(); }
    else cur += c;
  }
  parts.push_back(cur);
  if (parts.size() != 3) return false;
  int x = element_by_name(l, parts[0]), y = element_by_name(l, parts[1]);
  if (x < 0 || y < 0 || (parts[2] != "0" && parts[2] != "1")) return false;
  out = {x, y, parts[2] == "1" ? 1 : 0};
  return true;
}

bool parse_map_index(const std::string& s, int& out) {
  if (!s.starts_with("alpha")) return false;
  try { out = std::stoi(s.substr(5)); } catch (...) { return false; }
  return out >= 0;
}

// table body shared by table and rep parsers; stops at the given terminator
Result<UslTable> parse_maps_until(std::istream& in, int& lineno, const FiniteUslTop& lattice,
                                  const std::string& terminator,
                                  std::vector<std::string>* trailing, ParseError* err) {
  UslTable t{lattice, {}};
  std::vector<std::string> tk;
  std::string raw;
  while (next_line(in, lineno, tk, raw)) {
    if (tk[0] == terminator) {
      Result<UslTable> r;
      r.value = std::move(t);
      return r;
    }
    if (trailing && tk[0] == "coding:") {
      trailing->push_back(raw);
      continue;
    }
    int idx;
    if (!tk[0].ends_with(":") || !parse_map_index(tk[0].substr(0, tk[0].size() - 1), idx))
      return fail<UslTable>(err, lineno, "expected `alpha<i>: values`");
    if (idx != (int)t.maps.size())
      return fail<UslTable>(err, lineno, "maps must appear in index order");
    if (tk.size() != (size_t)lattice.size() + 1)
      return fail<UslTable>(err, lineno, "expected one value per lattice element");
    TableMap m;
    for (size_t i = 1; i < tk.size(); ++i) {
      try { m.push_back(std::stoi(tk[i])); }
      catch (...) { return fail<UslTable>(err, lineno, "bad value " + tk[i]); }
    }
    t.maps.push_back(std::move(m));
  }
  return fail<UslTable>(err, lineno, "missing `" + terminator + "`");
}

Result<CodingApparatus> parse_coding_lines(const std::vector<std::string>& lines,
                                           const FiniteUslTop& lattice, int lineno,
                                           ParseError* err) {
  CodingApparatus c;
  for (const auto& raw : lines) {
    auto tk = tokens(raw);
    // coding: alpha<i> <- (x,y,k)
    int idx;
    std::tuple<ElementId, ElementId, int> key;
    if (tk.size() != 4 || tk[2] != "<-" || !parse_map_index(tk[1], idx) ||
        !parse_g_key(tk[3], lattice, key))
      return fail<CodingApparatus>(err, lineno, "bad coding line: " + raw);
    c.g[key] = idx;
    if (!c.in_c(idx)) c.coding_set.push_back(idx);
  }
  Result<CodingApparatus> r;
  r.value = std::move(c);
  return r;
}

json usl_to_json(const FiniteUslTop& u, const std::string& label) {
  return json{{"label", label}, {"document", format_usl(u, label)}};
}

json env_to_json(const Env& env) {
  json j = json::object();
  for (const auto& [k, v] : env) j[k] = v;
  return j;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::True: return "TRUE";
    case Verdict::False: return "FALSE";
    default: return "UNKNOWN";
  }
}

void candidate_text(std::ostream& out, const CandidateRecord& rec, const char* model_role) {
  out << format_usl(rec.u, "candidate");
  for (const auto& [var, val] : rec.x_env)
    out << "assign " << var << " = " << rec.u.name(val) << "\n";
  if (rec.extension) {
    out << model_role << ":\n" << format_usl(rec.extension->structure, "model");
    for (size_t i = 0; i < rec.inclusion.size(); ++i)
      out << "include " << rec.u.name((ElementId)i) << " -> "
          << rec.extension->structure.name(rec.inclusion[i]) << "\n";
    for (const auto& [var, val] : rec.extension->env)
      out << "assign " << var << " = " << rec.extension->structure.name(val) << "\n";
    out << "matrix_value: " << (rec.extension->matrix_value ? "true" : "false") << "\n";
  }
}

json candidate_json(const CandidateRecord& rec) {
  json j;
  j["structure"] = usl_to_json(rec.u, "candidate");
  j["env"] = env_to_json(rec.x_env);
  if (rec.extension) {
    j["model"] = usl_to_json(rec.extension->structure, "model");
    j["model_env"] = env_to_json(rec.extension->env);
    j["inclusion"] = rec.inclusion;
    j["matrix_value"] = rec.extension->matrix_value;
  }
  return j;
}

}  // namespace

Result<SubstructureDoc> parse_substructure_doc(const std::string& text, ParseError* err) {
  std::istringstream in(text);
  SubstructureDoc doc;
  auto small = parse_usl(in, err);
  if (!small.ok()) return {std::nullopt, small.diag};
  auto big = parse_usl(in, err);
  if (!big.ok()) return {std::nullopt, big.diag};
  doc.small = std::move(*small);
  doc.big = std::move(*big);

  int lineno = 0;
  std::vector<std::string> tk;
  std::string raw;
  if (!next_line(in, lineno, tk, raw) || tk[0] != "inclusion")
    return fail<SubstructureDoc>(err, lineno, "expected `inclusion` section");
  doc.inclusion.assign(doc.small.usl.size(), -1);
  while (next_line(in, lineno, tk, raw)) {
    if (tk[0] == "end") {
      for (size_t i = 0; i < doc.inclusion.size(); ++i)
        if (doc.inclusion[i] < 0)
          return fail<SubstructureDoc>(err, lineno,
                                       "inclusion missing " + doc.small.usl.name((ElementId)i));
      Result<SubstructureDoc> r;
      r.value = std::move(doc);
      return r;
    }
    if (tk.size() != 3 || tk[1] != "->")
      return fail<SubstructureDoc>(err, lineno, "expected `<small> -> <big>`");
    int s = element_by_name(doc.small.usl, tk[0]);
    int b = element_by_name(doc.big.usl, tk[2]);
    if (s < 0 || b < 0) return fail<SubstructureDoc>(err, lineno, "unknown element name");
    doc.inclusion[s] = b;
  }
  return fail<SubstructureDoc>(err, lineno, "missing `end`");
}

std::string format_substructure(const SubstructureWitness& w, const std::string& small_label,
                                const std::string& big_label) {
  std::ostringstream out;
  out << format_usl(w.small, small_label) << format_usl(w.big, big_label) << "inclusion\n";
  for (size_t i = 0; i < w.inclusion.size(); ++i)
    out << w.small.name((ElementId)i) << " -> " << w.big.name(w.inclusion[i]) << "\n";
  out << "end\n";
  return out.str();
}

Result<TableDoc> parse_table_doc(const std::string& text, ParseError* err) {
  std::istringstream in(text);
  auto lat = parse_usl(in, err);
  if (!lat.ok()) return {std::nullopt, lat.diag};
  TableDoc doc;
  doc.lattice = std::move(*lat);

  int lineno = 0;
  std::vector<std::string> tk;
  std::string raw;
  if (!next_line(in, lineno, tk, raw) || tk.size() != 4 || tk[0] != "table" || tk[2] != "over")
    return fail<TableDoc>(err, lineno, "expected `table <name> over <lattice>`");
  if (tk[3] != doc.lattice.label)
    return fail<TableDoc>(err, lineno, "unknown lattice " + tk[3]);
  doc.label = tk[1];
  std::vector<std::string> coding_lines;
  auto t = parse_maps_until(in, lineno, doc.lattice.usl, "end", &coding_lines, err);
  if (!t.ok()) return {std::nullopt, t.diag};
  doc.table = std::move(*t);
  if (!coding_lines.empty()) {
    auto c = parse_coding_lines(coding_lines, doc.lattice.usl, lineno, err);
    if (!c.ok()) return {std::nullopt, c.diag};
    doc.coding = std::move(*c);
  }
  Result<TableDoc> r;
  r.value = std::move(doc);
  return r;
}

std::string format_table(const UslTable& t, const std::string& label,
                         const std::string& lattice_label, const CodingApparatus* coding) {
  std::ostringstream out;
  out << "table " << label << " over " << lattice_label << "\n";
  for (size_t i = 0; i < t.maps.size(); ++i) {
    out << "alpha" << i << ":";
    for (int v : t.maps[i]) out << " " << v;
    out << "\n";
  }
  if (coding)
    for (const auto& [key, m] : coding->g)
      out << "coding: alpha" << m << " <- (" << t.lattice.name(std::get<0>(key)) << ","
          << t.lattice.name(std::get<1>(key)) << "," << std::get<2>(key) << ")\n";
  out << "end\n";
  return out.str();
}

Result<RepDoc> parse_rep_doc_stream(std::istream& in, ParseError* err) {
  auto lat = parse_usl(in, err);
  if (!lat.ok()) return {std::nullopt, lat.diag};
  RepDoc doc;
  doc.rep.lattice = lat->usl;

  int lineno = 0;
  std::vector<std::string> tk;
  std::string raw;
  if (!next_line(in, lineno, tk, raw) || tk.size() != 6 || tk[0] != "rep" || tk[2] != "over" ||
      tk[4] != "depth")
    return fail<RepDoc>(err, lineno, "expected `rep <name> over <lattice> depth <d>`");
  doc.label = tk[1];
  int depth;
  try { depth = std::stoi(tk[5]); } catch (...) { return fail<RepDoc>(err, lineno, "bad depth"); }

  std::vector<std::string> coding_lines;
  while (next_line(in, lineno, tk, raw)) {
    if (tk[0] == "end") {
      if ((int)doc.rep.theta.size() != depth + 1)
        return fail<RepDoc>(err, lineno, "stage count does not match depth");
      if (!coding_lines.empty()) {
        auto c = parse_coding_lines(coding_lines, doc.rep.lattice, lineno, err);
        if (!c.ok()) return {std::nullopt, c.diag};
        doc.rep.coding = std::move(*c);
      }
      Result<RepDoc> r;
      r.value = std::move(doc);
      return r;
    }
    if (tk[0] == "coding:") {
      coding_lines.push_back(raw);
      continue;
    }
    if (tk.size() != 2 || tk[0] != "stage")
      return fail<RepDoc>(err, lineno, "expected `stage <label>`");
    bool star = tk[1].ends_with("*");
    auto t = parse_maps_until(in, lineno, doc.rep.lattice, "endstage", nullptr, err);
    if (!t.ok()) return {std::nullopt, t.diag};
    (star ? doc.rep.theta_star : doc.rep.theta).push_back(std::move(*t));
  }
  return fail<RepDoc>(err, lineno, "missing `end`");
}

Result<RepDoc> parse_rep_doc(const std::string& text, ParseError* err) {
  std::istringstream in(text);
  return parse_rep_doc_stream(in, err);
}

std::string format_rep(const RepPrefix& r, const std::string& label) {
  std::ostringstream out;
  out << format_usl(r.lattice, "lattice");
  out << "rep " << label << " over lattice depth " << r.depth() << "\n";
  for (size_t i = 0; i < r.theta.size(); ++i) {
    out << "stage theta" << i << "\n";
    for (size_t m = 0; m < r.theta[i].maps.size(); ++m) {
      out << "alpha" << m << ":";
      for (int v : r.theta[i].maps[m]) out << " " << v;
      out << "\n";
    }
    out << "endstage\n";
    if (i < r.theta_star.size()) {
      out << "stage theta" << i + 1 << "*\n";
      for (size_t m = 0; m < r.theta_star[i].maps.size(); ++m) {
        out << "alpha" << m << ":";
        for (int v : r.theta_star[i].maps[m]) out << " " << v;
        out << "\n";
      }
      out << "endstage\n";
    }
  }
  if (r.coding)
    for (const auto& [key, m] : r.coding->g)
      out << "coding: alpha" << m << " <- (" << r.lattice.name(std::get<0>(key)) << ","
          << r.lattice.name(std::get<1>(key)) << "," << std::get<2>(key) << ")\n";
  out << "end\n";
  return out.str();
}

Result<TreeDoc> parse_tree_doc(const std::string& text, ParseError* err) {
  std::istringstream in(text);
  auto repdoc = parse_rep_doc_stream(in, err);
  if (!repdoc.ok()) return {std::nullopt, repdoc.diag};
  TreeDoc doc;
  doc.tree.rep = std::move(repdoc->rep);

  int lineno = 0;
  std::vector<std::string> tk;
  std::string raw;
  if (!next_line(in, lineno, tk, raw) || tk.size() != 8 || tk[0] != "tree" || tk[2] != "over" ||
      tk[4] != "depth" || tk[6] != "offset")
    return fail<TreeDoc>(err, lineno, "expected `tree <name> over <rep> depth <d> offset <o>`");
  doc.label = tk[1];
  try {
    doc.tree.depth = std::stoi(tk[5]);
    doc.tree.stage_offset = std::stoi(tk[7]);
  } catch (...) { return fail<TreeDoc>(err, lineno, "bad depth/offset"); }
  if (doc.tree.depth < 0 || doc.tree.stage_offset < 0)
    return fail<TreeDoc>(err, lineno, "bad depth/offset");
  doc.tree.levels.resize(doc.tree.depth);
  for (int l = 0; l < doc.tree.depth; ++l)
    doc.tree.levels[l].rho.resize(doc.tree.input_stage(l).maps.size());

  auto read_values = [&](size_t from, std::vector<int>& out) {
    for (size_t i = from; i < tk.size(); ++i) {
      try { out.push_back(std::stoi(tk[i])); }
      catch (...) { return false; }
    }
    return true;
  };
  while (next_line(in, lineno, tk, raw)) {
    if (tk[0] == "end") {
      auto diag = validate_tree(doc.tree);
      if (!diag.empty()) return fail<TreeDoc>(err, lineno, diag.code + ": " + diag.message);
      Result<TreeDoc> r;
      r.value = std::move(doc);
      return r;
    }
    std::string head = tk[0];
    if (!head.ends_with(":")) return fail<TreeDoc>(err, lineno, "unrecognized line");
    head.pop_back();
    if (head == "root") {
      if (!read_values(1, doc.tree.root)) return fail<TreeDoc>(err, lineno, "bad root value");
    } else if (head.starts_with("pi")) {
      int l;
      try { l = std::stoi(head.substr(2)); } catch (...) { return fail<TreeDoc>(err, lineno, "bad pi level"); }
      if (l < 0 || l >= doc.tree.depth) return fail<TreeDoc>(err, lineno, "pi level out of range");
      if (!read_values(1, doc.tree.levels[l].pi)) return fail<TreeDoc>(err, lineno, "bad pi value");
    } else if (head.starts_with("rho")) {
      auto comma = head.find(',');
      int l, a;
      try {
        l = std::stoi(head.substr(3, comma - 3));
        a = std::stoi(head.substr(comma + 1));
      } catch (...) { return fail<TreeDoc>(err, lineno, "bad rho header"); }
      if (l < 0 || l >= doc.tree.depth || a < 0 || a >= (int)doc.tree.levels[l].rho.size())
        return fail<TreeDoc>(err, lineno, "rho index out of range");
      if (!read_values(1, doc.tree.levels[l].rho[a]))
        return fail<TreeDoc>(err, lineno, "bad rho value");
    } else {
      return fail<TreeDoc>(err, lineno, "unrecognized line");
    }
  }
  return fail<TreeDoc>(err, lineno, "missing `end`");
}

std::string format_tree(const TreeDoc& doc) {
  std::ostringstream out;
  out << format_rep(doc.tree.rep, "rep");
  out << "tree " << doc.label << " over rep depth " << doc.tree.depth << " offset "
      << doc.tree.stage_offset << "\n";
  out << "root:";
  for (int v : doc.tree.root) out << " " << v;
  out << "\n";
  for (int l = 0; l < doc.tree.depth; ++l) {
    if (!doc.tree.levels[l].pi.empty()) {
      out << "pi" << l << ":";
      for (int v : doc.tree.levels[l].pi) out << " " << v;
      out << "\n";
    }
    for (size_t a = 0; a < doc.tree.levels[l].rho.size(); ++a) {
      out << "rho" << l << "," << a << ":";
      for (int v : doc.tree.levels[l].rho[a]) out << " " << v;
      out << "\n";
    }
  }
  out << "end\n";
  return out.str();
}

std::string certificate_text(const Sigma2Certificate& c) {
  std::ostringstream out;
  out << "sigma2 certificate\nverdict: " << verdict_name(c.verdict) << "\n";
  if (!c.note.empty()) out << "note: " << c.note << "\n";
  if (c.matrix) out << "matrix: " << to_string(c.matrix) << "\n";
  out << "exists:";
  for (const auto& v : c.existential_vars) out << " " << v;
  out << "\nforall:";
  for (const auto& v : c.universal_vars) out << " " << v;
  out << "\n";
  if (c.witness) {
    out << "witness:\n";
    candidate_text(out, *c.witness, "model");
  }
  for (const auto& r : c.refutations) {
    out << "refutation:\n";
    candidate_text(out, r, "countermodel");
  }
  return out.str();
}

std::string certificate_text(const Pi2Certificate& c) {
  std::ostringstream out;
  out << "pi2 certificate\nverdict: " << verdict_name(c.verdict) << "\n";
  if (!c.note.empty()) out << "note: " << c.note << "\n";
  if (c.matrix) out << "matrix: " << to_string(c.matrix) << "\n";
  out << "forall:";
  for (const auto& v : c.universal_vars) out << " " << v;
  out << "\nexists:";
  for (const auto& v : c.existential_vars) out << " " << v;
  out << "\n";
  if (c.refutation) {
    out << "refutation:\n";
    candidate_text(out, *c.refutation, "model");
  }
  for (const auto& r : c.realizations) {
    out << "realization:\n";
    candidate_text(out, r, "model");
  }
  return out.str();
}

std::string certificate_json(const Sigma2Certificate& c) {
  json j;
  j["kind"] = "sigma2";
  j["verdict"] = verdict_name(c.verdict);
  if (!c.note.empty()) j["note"] = c.note;
  if (c.matrix) j["matrix"] = to_string(c.matrix);
  j["existential_vars"] = c.existential_vars;
  j["universal_vars"] = c.universal_vars;
  if (c.witness) j["witness"] = candidate_json(*c.witness);
  j["refutations"] = json::array();
  for (const auto& r : c.refutations) j["refutations"].push_back(candidate_json(r));
  return j.dump(2);
}

std::string certificate_json(const Pi2Certificate& c) {
  json j;
  j["kind"] = "pi2";
  j["verdict"] = verdict_name(c.verdict);
  if (!c.note.empty()) j["note"] = c.note;
  if (c.matrix) j["matrix"] = to_string(c.matrix);
  j["universal_vars"] = c.universal_vars;
  j["existential_vars"] = c.existential_vars;
  if (c.refutation) j["refutation"] = candidate_json(*c.refutation);
  j["realizations"] = json::array();
  for (const auto& r : c.realizations) j["realizations"].push_back(candidate_json(r));
  return j.dump(2);
}

std::string report_text(const TableReport& r) {
  std::ostringstream out;
  out << (r.pass() ? "pass" : "fail") << "\n";
  for (const auto& f : r.failures) {
    out << f.axiom;
    if (f.x >= 0) out << " x=" << f.x;
    if (f.y >= 0) out << " y=" << f.y;
    if (f.alpha >= 0) out << " alpha=" << f.alpha << " beta=" << f.beta;
    if (!f.detail.empty()) out << " " << f.detail;
    out << "\n";
  }
  return out.str();
}

std::string report_json(const TableReport& r) {
  json j;
  j["pass"] = r.pass();
  j["failures"] = json::array();
  for (const auto& f : r.failures)
    j["failures"].push_back({{"axiom", f.axiom}, {"x", f.x}, {"y", f.y}, {"alpha", f.alpha},
                             {"beta", f.beta}, {"detail", f.detail}});
  return j.dump(2);
}

std::string decomposition_text(const DecompositionWitness& w) {
  std::ostringstream out;
  out << format_usl(w.u, "u") << format_usl(w.v, "v") << format_usl(w.u1.result, "u1")
      << format_usl(w.u2, "u2");
  out << "inclusion\n";
  for (size_t i = 0; i < w.inclusion.size(); ++i)
    out << w.u.name((ElementId)i) << " -> " << w.v.name(w.inclusion[i]) << "\n";
  out << "end\n";
  out << "h\n";
  for (size_t i = 0; i < w.h.size(); ++i)
    out << w.u1.result.name((ElementId)i) << " -> " << w.v.name(w.h[i]) << "\n";
  out << "end\n";
  out << "f\n";
  for (size_t i = 0; i < w.f.size(); ++i)
    out << w.v.name((ElementId)i) << " -> " << w.u2.name(w.f[i]) << "\n";
  out << "end\n";
  out << "u1_into_u2\n";
  for (size_t i = 0; i < w.u1_into_u2.size(); ++i)
    out << w.u1.result.name((ElementId)i) << " -> " << w.u2.name(w.u1_into_u2[i]) << "\n";
  out << "end\n";
  return out.str();
}

std::string decomposition_json(const DecompositionWitness& w) {
  json j;
  j["u"] = usl_to_json(w.u, "u");
  j["v"] = usl_to_json(w.v, "v");
  j["u1"] = usl_to_json(w.u1.result, "u1");
  j["u2"] = usl_to_json(w.u2, "u2");
  j["inclusion"] = w.inclusion;
  j["h"] = w.h;
  j["f"] = w.f;
  j["u1_into_u2"] = w.u1_into_u2;
  j["congruence"] = w.congruence;
  j["fresh_names"] = w.fresh_names;
  return j.dump(2);
}

std::string usl_json(const FiniteUslTop& u, const std::string& label) {
  return usl_to_json(u, label).dump(2);
}

}  // namespace husl
