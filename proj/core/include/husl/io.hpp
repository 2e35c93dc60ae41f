#pragma once

#include <iosfwd>
#include <string>

#include "husl/usl.hpp"

namespace husl {

struct ParseError {
  int line = 0;
  std::string message;
};

// Structure text format:
//   usl <name>
//   elements: <id0> <id1> ...
//   bot: <id>
//   top: <id>
//   <id> < <id>      (cover relations; reflexive-transitive closure implied)
//   end
struct NamedUsl {
  std::string label;
  FiniteUslTop usl;
};

Result<NamedUsl> parse_usl(std::istream& in, ParseError* err = nullptr);
Result<NamedUsl> parse_usl_string(const std::string& text, ParseError* err = nullptr);

std::string format_usl(const FiniteUslTop& u, const std::string& label);

}  // namespace husl
