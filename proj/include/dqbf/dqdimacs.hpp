// SPDX-License-Identifier: MIT
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dqbf/formula.hpp"

namespace dqbf {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };
  int line = 0;
  std::string message;
  Severity severity = Severity::Error;
};

struct ParseResult {
  std::optional<Formula> formula;
  std::vector<ParseDiagnostic> diagnostics;
  int tautologies_dropped = 0;
  int duplicate_literals = 0;

  bool ok() const { return formula.has_value(); }
  // First error, formatted as "line N: message".
  std::string error() const;
};

ParseResult parse_dqdimacs(std::string_view text);
std::string serialize_dqdimacs(const Formula& f);

}  // namespace dqbf
