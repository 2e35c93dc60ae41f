// Batch command-line surface over the library modules. Exit codes are
// uniform across subcommands: 0 true/valid, 1 false/invalid, 2 parse or
// format error, 3 cap exceeded, 4 fragment violation.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "husl/decide.hpp"
#include "husl/enumerate.hpp"
#include "husl/extension.hpp"
#include "husl/io.hpp"
#include "husl/sentence.hpp"
#include "husl/serialize.hpp"
#include "husl/table.hpp"
#include "husl/tree.hpp"

namespace {

constexpr int kTrue = 0, kFalse = 1, kParse = 2, kCap = 3, kFragment = 4;

struct Options {
  int max_exists = 3;
  int max_forall = 2;
  int max_size = 9;
  int depth = 1;
  double time_budget = 60.0;
  bool cert = false;
  std::string format = "text";
};

husl::RunCaps run_caps(const Options& o) {
  husl::RunCaps caps;
  caps.max_exists = o.max_exists;
  caps.max_forall = o.max_forall;
  caps.max_witness_size = o.max_size;
  caps.max_extension_size = o.max_size * 4;
  caps.time_budget_seconds = o.time_budget;
  return caps;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

int file_error(const std::string& path) {
  std::cerr << "cannot read " << path << "\n";
  return kParse;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-exists", o.max_exists, "existential block cap");
  cmd->add_option("--max-forall", o.max_forall, "universal block cap");
  cmd->add_option("--max-size", o.max_size, "witness structure size cap");
  cmd->add_option("--depth", o.depth, "stage/tree depth");
  cmd->add_option("--time-budget", o.time_budget, "seconds before giving up");
  cmd->add_flag("--cert", o.cert, "emit the full certificate");
  cmd->add_option("--format", o.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
}

int cmd_decide(const std::string& text, const Options& o) {
  husl::SyntaxError serr;
  auto parsed = husl::parse_sentence(text, &serr);
  if (!parsed.ok()) {
    std::cerr << "parse error: " << parsed.diag.message << "\n";
    return kParse;
  }
  auto caps = run_caps(o);
  auto s2 = husl::prenex_sigma2(*parsed);
  if (s2.ok()) {
    auto cert = husl::decide_sigma2(*s2, caps);
    if (o.cert)
      std::cout << (o.format == "json" ? husl::certificate_json(cert)
                                       : husl::certificate_text(cert));
    switch (cert.verdict) {
      case husl::Verdict::True: std::cout << "TRUE\n"; return kTrue;
      case husl::Verdict::False: std::cout << "FALSE\n"; return kFalse;
      default: std::cout << "UNKNOWN: " << cert.note << "\n"; return kCap;
    }
  }
  auto p2 = husl::prenex_pi2(*parsed);
  if (p2.ok()) {
    auto cert = husl::decide_pi2(*p2, caps);
    if (o.cert)
      std::cout << (o.format == "json" ? husl::certificate_json(cert)
                                       : husl::certificate_text(cert));
    switch (cert.verdict) {
      case husl::Verdict::True: std::cout << "TRUE\n"; return kTrue;
      case husl::Verdict::False: std::cout << "FALSE\n"; return kFalse;
      default: std::cout << "UNKNOWN: " << cert.note << "\n"; return kCap;
    }
  }
  std::cerr << "not a two-block sentence: " << s2.diag.message << "\n";
  return kFragment;
}

int cmd_check_aee(const std::string& path) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  husl::ParseError perr;
  auto doc = husl::parse_substructure_doc(text, &perr);
  if (!doc.ok()) {
    std::cerr << doc.diag.message << "\n";
    return kParse;
  }
  husl::SubstructureWitness w{doc->small.usl, doc->big.usl, doc->inclusion};
  auto sub = husl::check_substructure(w);
  if (!sub.empty()) {
    std::cerr << "not a substructure: " << sub.code << ": " << sub.message << "\n";
    return kParse;
  }
  bool aee = husl::is_almost_end_extension(w);
  std::cout << (aee ? "almost-end-extension\n" : "not an almost-end-extension\n");
  return aee ? kTrue : kFalse;
}

int cmd_enum_usl(int n, const Options& o) {
  husl::EnumCaps caps;
  caps.time_budget_seconds = o.time_budget;
  auto all = husl::enumerate_usl_top(n, caps);
  nlohmann::json arr = nlohmann::json::array();
  std::vector<int> per_size(n + 1, 0);
  for (size_t i = 0; i < all.size(); ++i) {
    ++per_size[all[i].size()];
    std::string label = "s" + std::to_string(i);
    if (o.format == "json") arr.push_back(nlohmann::json::parse(husl::usl_json(all[i], label)));
    else std::cout << husl::format_usl(all[i], label);
  }
  if (o.format == "json") {
    nlohmann::json j{{"structures", arr}, {"count", all.size()}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "count: " << all.size() << "\n";
  }
  return kTrue;
}

int cmd_free_ext(const std::string& path, const std::vector<std::string>& gens,
                 const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto u = husl::parse_usl_string(text);
  if (!u.ok()) {
    std::cerr << u.diag.message << "\n";
    return kParse;
  }
  for (const auto& g : gens)
    for (const auto& n : u->usl.names())
      if (g == n) {
        std::cerr << "generator " << g << " collides with an element name\n";
        return kParse;
      }
  auto fe = husl::free_extend(u->usl, gens);
  if (o.format == "json") std::cout << husl::usl_json(fe.result, u->label + "_ext") << "\n";
  else std::cout << husl::format_usl(fe.result, u->label + "_ext");
  return kTrue;
}

int cmd_decompose(const std::string& path, const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto doc = husl::parse_substructure_doc(text);
  if (!doc.ok()) {
    std::cerr << doc.diag.message << "\n";
    return kParse;
  }
  husl::SubstructureWitness w{doc->small.usl, doc->big.usl, doc->inclusion};
  auto sub = husl::check_substructure(w);
  if (!sub.empty()) {
    std::cerr << "not a substructure: " << sub.code << ": " << sub.message << "\n";
    return kParse;
  }
  auto d = husl::decompose(w);
  if (!d.ok()) {
    std::cerr << d.diag.code << ": " << d.diag.message << "\n";
    return kFalse;
  }
  std::cout << (o.format == "json" ? husl::decomposition_json(*d) + "\n"
                                   : husl::decomposition_text(*d));
  return kTrue;
}

int cmd_table_verify(const std::string& path, const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto doc = husl::parse_table_doc(text);
  if (!doc.ok()) {
    std::cerr << doc.diag.message << "\n";
    return kParse;
  }
  auto rep = husl::verify_table(doc->table);
  std::cout << (o.format == "json" ? husl::report_json(rep) + "\n" : husl::report_text(rep));
  return rep.pass() ? kTrue : kFalse;
}

int cmd_table_build(const std::string& path, const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto u = husl::parse_usl_string(text);
  if (!u.ok()) {
    std::cerr << u.diag.message << "\n";
    return kParse;
  }
  husl::TableCaps caps;
  caps.time_budget_seconds = o.time_budget;
  auto t = husl::build_table(u->usl, caps);
  std::cout << husl::format_usl(u->usl, u->label)
            << husl::format_table(t, u->label + "_table", u->label);
  return kTrue;
}

int cmd_rep_build(const std::string& path, bool coding, const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto u = husl::parse_usl_string(text);
  if (!u.ok()) {
    std::cerr << u.diag.message << "\n";
    return kParse;
  }
  husl::TableCaps caps;
  caps.time_budget_seconds = o.time_budget;
  auto r = husl::build_rep_prefix(u->usl, o.depth, coding, caps);
  if (!r.ok()) {
    std::cerr << r.diag.code << ": " << r.diag.message << "\n";
    return kFalse;
  }
  std::cout << husl::format_rep(*r, u->label + "_rep");
  return kTrue;
}

int cmd_rep_verify(const std::string& path, const Options& o) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  auto doc = husl::parse_rep_doc(text);
  if (!doc.ok()) {
    std::cerr << doc.diag.message << "\n";
    return kParse;
  }
  auto rep = doc->rep.coding ? husl::verify_coding_ready(doc->rep)
                             : husl::verify_rep_prefix(doc->rep);
  std::cout << (o.format == "json" ? husl::report_json(rep) + "\n" : husl::report_text(rep));
  return rep.pass() ? kTrue : kFalse;
}

std::vector<int> parse_values(const std::string& s) {
  std::istringstream ss(s);
  std::vector<int> out;
  int v;
  while (ss >> v) out.push_back(v);
  return out;
}

int tree_doc_from(const std::string& path, husl::TreeDoc& doc) {
  std::string text;
  if (!read_file(path, text)) return file_error(path);
  husl::ParseError perr;
  auto parsed = husl::parse_tree_doc(text, &perr);
  if (!parsed.ok()) {
    std::cerr << parsed.diag.message << "\n";
    return kParse;
  }
  doc = std::move(*parsed);
  return -1;
}

int pair_elements(const husl::FiniteUslTop& l, const std::string& spec, husl::ElementId& x,
                  husl::ElementId& y) {
  auto comma = spec.find(',');
  if (comma == std::string::npos) {
    std::cerr << "expected --pair x,y\n";
    return kParse;
  }
  x = y = -1;
  for (husl::ElementId e = 0; e < l.size(); ++e) {
    if (l.name(e) == spec.substr(0, comma)) x = e;
    if (l.name(e) == spec.substr(comma + 1)) y = e;
  }
  if (x < 0 || y < 0) {
    std::cerr << "unknown element in pair\n";
    return kParse;
  }
  return -1;
}

int cmd_tree(const std::string& action, const std::string& path, const std::string& sigma_s,
             const std::string& pair_s, const std::string& bits_s, const std::string& q_s,
             const Options& o) {
  husl::TreeDoc doc;
  if (int rc = tree_doc_from(path, doc); rc >= 0) return rc;
  const auto& t = doc.tree;

  if (action == "apply") {
    auto out = husl::apply(t, parse_values(sigma_s));
    if (!out.ok()) {
      std::cerr << out.diag.code << ": " << out.diag.message << "\n";
      return kFalse;
    }
    for (size_t i = 0; i < out->size(); ++i) std::cout << (i ? " " : "") << (*out)[i];
    std::cout << "\n";
    return kTrue;
  }
  if (action == "check") {
    auto bcf = husl::check_branch_coding_free(t);
    auto cr = husl::check_congruence_respecting(t);
    std::cout << "branch-coding-free: " << (bcf.pass() ? "pass" : "fail") << "\n"
              << "congruence-respecting: " << (cr.pass() ? "pass" : "fail") << "\n";
    if (!bcf.pass()) std::cout << husl::report_text(bcf);
    if (!cr.pass()) std::cout << husl::report_text(cr);
    return bcf.pass() && cr.pass() ? kTrue : kFalse;
  }

  husl::ElementId x, y;
  if (action == "encode" || action == "decode" || action == "splits") {
    if (int rc = pair_elements(t.rep.lattice, pair_s, x, y); rc >= 0) return rc;
  }
  if (action == "encode") {
    std::vector<int> bits;
    for (char c : bits_s) {
      if (c != '0' && c != '1') {
        std::cerr << "bits must be 0/1\n";
        return kParse;
      }
      bits.push_back(c - '0');
    }
    auto out = husl::encode_bits(t, x, y, bits);
    if (!out.ok()) {
      std::cerr << out.diag.code << ": " << out.diag.message << "\n";
      return kFalse;
    }
    for (size_t i = 0; i < out->size(); ++i) std::cout << (i ? " " : "") << (*out)[i];
    std::cout << "\n";
    return kTrue;
  }
  if (action == "decode") {
    auto out = husl::decode_bits(t.rep, parse_values(sigma_s), x, y);
    if (!out.ok()) {
      std::cerr << out.diag.code << ": " << out.diag.message << "\n";
      return kFalse;
    }
    for (int b : *out) std::cout << b;
    std::cout << "\n";
    return kTrue;
  }
  if (action == "splits") {
    husl::DecisionTable q;
    if (q_s.starts_with("const:")) {
      int b = q_s == "const:1";
      q = [b](int, const std::vector<int>&) { return b; };
    } else if (q_s.starts_with("first:")) {
      int e = -1;
      for (husl::ElementId el = 0; el < t.rep.lattice.size(); ++el)
        if (t.rep.lattice.name(el) == q_s.substr(6)) e = el;
      if (e < 0) {
        std::cerr << "unknown element in --q\n";
        return kParse;
      }
      const auto rep = t.rep;  // copy for the closure
      q = [rep, e](int n, const std::vector<int>& s) {
        return n >= 1 ? rep.theta.back().maps[s[0]][e] % 2 : 0;
      };
    } else {
      std::cerr << "--q must be const:<b> or first:<element>\n";
      return kParse;
    }
    auto splits = husl::find_splits(t, q, x, y, o.depth);
    for (const auto& sp : splits) {
      std::cout << "split n=" << sp.n << " sigma=";
      for (int v : sp.sigma) std::cout << v << " ";
      std::cout << "tau=";
      for (int v : sp.tau) std::cout << v << " ";
      std::cout << "\n";
    }
    std::cout << "count: " << splits.size() << "\n";
    return kTrue;
  }
  std::cerr << "unknown tree action\n";
  return kParse;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite USL-with-top decision engine and combinatorial laboratory"};
  app.require_subcommand(1);
  Options o;

  std::string sentence, path, gens_s, sigma_s, pair_s, bits_s, q_s = "const:0";
  int enum_n = 4;
  bool coding = false;

  auto* decide = app.add_subcommand("decide", "decide a two-block sentence");
  decide->add_option("sentence", sentence, "sentence text")->required();
  add_common(decide, o);

  auto* aee = app.add_subcommand("check-aee", "almost-end-extension check");
  aee->add_option("file", path, "substructure document")->required();
  add_common(aee, o);

  auto* en = app.add_subcommand("enum-usl", "enumerate structures up to a size");
  en->add_option("n", enum_n, "size bound")->required();
  add_common(en, o);

  auto* fx = app.add_subcommand("free-ext", "top-preserving free extension");
  fx->add_option("file", path, "structure document")->required();
  fx->add_option("--gens", gens_s, "comma-separated generator names")->required();
  add_common(fx, o);

  auto* dec = app.add_subcommand("decompose", "decompose an almost-end-extension");
  dec->add_option("file", path, "substructure document")->required();
  add_common(dec, o);

  auto* table = app.add_subcommand("table", "table operations");
  table->require_subcommand(1);
  auto* tv = table->add_subcommand("verify", "check the table axioms");
  tv->add_option("file", path, "table document")->required();
  add_common(tv, o);
  auto* tb = table->add_subcommand("build", "search for a table");
  tb->add_option("file", path, "structure document")->required();
  add_common(tb, o);

  auto* repc = app.add_subcommand("rep", "representation prefix operations");
  repc->require_subcommand(1);
  auto* rb = repc->add_subcommand("build", "build a representation prefix");
  rb->add_option("file", path, "structure document")->required();
  rb->add_flag("--coding", coding, "include the coding apparatus");
  add_common(rb, o);
  auto* rv = repc->add_subcommand("verify", "verify a representation prefix");
  rv->add_option("file", path, "rep document")->required();
  add_common(rv, o);

  auto* tree = app.add_subcommand("tree", "uniform tree operations");
  tree->require_subcommand(1);
  std::string tree_action;
  for (const char* act : {"apply", "check", "encode", "decode", "splits"}) {
    auto* sub = tree->add_subcommand(act, act);
    sub->add_option("file", path, "tree document")->required();
    sub->add_option("--sigma", sigma_s, "input string / prefix values");
    sub->add_option("--pair", pair_s, "coding pair x,y");
    sub->add_option("--bits", bits_s, "bit string to encode");
    sub->add_option("--q", q_s, "decision table: const:<b> or first:<element>");
    add_common(sub, o);
    sub->callback([&tree_action, act] { tree_action = act; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kParse;
  }

  try {
    if (decide->parsed()) return cmd_decide(sentence, o);
    if (aee->parsed()) return cmd_check_aee(path);
    if (en->parsed()) return cmd_enum_usl(enum_n, o);
    if (fx->parsed()) {
      std::vector<std::string> gens;
      std::string cur;
      for (char c : gens_s) {
        if (c == ',') { gens.push_back(cur); cur.clear(); }
        else cur += c;
      }
      if (!cur.empty()) gens.push_back(cur);
      return cmd_free_ext(path, gens, o);
    }
    if (dec->parsed()) return cmd_decompose(path, o);
    if (tv->parsed()) return cmd_table_verify(path, o);
    if (tb->parsed()) return cmd_table_build(path, o);
    if (rb->parsed()) return cmd_rep_build(path, coding, o);
    if (rv->parsed()) return cmd_rep_verify(path, o);
    if (tree->parsed()) return cmd_tree(tree_action, path, sigma_s, pair_s, bits_s, q_s, o);
  } catch (const husl::CapExceeded& ce) {
    std::cerr << "cap exceeded: " << ce.what << "\n";
    return kCap;
  }
  return kParse;
}
