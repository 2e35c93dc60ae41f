#pragma once

#include <optional>
#include <string>

#include "husl/decide.hpp"
#include "husl/extension.hpp"
#include "husl/io.hpp"
#include "husl/table.hpp"
#include "husl/tree.hpp"

// Text and JSON forms of every document the command line reads or writes.
// Structures embed the order-core text format; tables, representation
// prefixes and trees have line formats of their own, documented next to the
// parsers. Text and JSON carry the same information.

namespace husl {

struct SubstructureDoc {
  NamedUsl small, big;
  std::vector<ElementId> inclusion;
};

// usl block, usl block, `inclusion` section with `<small> -> <big>` lines
Result<SubstructureDoc> parse_substructure_doc(const std::string& text,
                                               ParseError* err = nullptr);
std::string format_substructure(const SubstructureWitness& w, const std::string& small_label,
                                const std::string& big_label);

struct TableDoc {
  NamedUsl lattice;
  std::string label;
  UslTable table;
  std::optional<CodingApparatus> coding;
};

// usl block, then `table <name> over <lattice>`, `alpha<i>: v...` per map,
// optional `coding: alpha<i> <- (x,y,k)` lines, `end`
Result<TableDoc> parse_table_doc(const std::string& text, ParseError* err = nullptr);
std::string format_table(const UslTable& t, const std::string& label,
                         const std::string& lattice_label,
                         const CodingApparatus* coding = nullptr);

struct RepDoc {
  std::string label;
  RepPrefix rep;
};

// usl block, then `rep <name> over <lattice> depth <d>`, `stage <label>` /
// `endstage` sections (labels theta<i> and theta<i>*), coding lines, `end`
Result<RepDoc> parse_rep_doc(const std::string& text, ParseError* err = nullptr);
std::string format_rep(const RepPrefix& r, const std::string& label);

struct TreeDoc {
  std::string label;
  UniformTreeSpec tree;
};

// rep document sections, then `tree <name> over <rep> depth <d> offset <o>`,
// `root:`, `pi<l>:`, `rho<l>,<a>:` lines, `end`; values are map indices
Result<TreeDoc> parse_tree_doc(const std::string& text, ParseError* err = nullptr);
std::string format_tree(const TreeDoc& doc);

std::string certificate_text(const Sigma2Certificate& c);
std::string certificate_text(const Pi2Certificate& c);
std::string certificate_json(const Sigma2Certificate& c);
std::string certificate_json(const Pi2Certificate& c);

std::string report_text(const TableReport& r);
std::string report_json(const TableReport& r);

std::string decomposition_text(const DecompositionWitness& w);
std::string decomposition_json(const DecompositionWitness& w);

std::string usl_json(const FiniteUslTop& u, const std::string& label);

}  // namespace husl
