// SPDX-License-Identifier: MIT
#include "dqbf/dqdimacs.hpp"

#include <charconv>
#include <cstdint>
#include <sstream>

namespace dqbf {

namespace {

struct ParseFailure {
  int line;
  std::string message;
};

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool next(std::string_view& line) {
    if (pos_ >= text_.size()) return false;
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    line = text_.substr(pos_, end - pos_);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos_ = end + 1;
    ++lineno_;
    return true;
  }
  int lineno() const { return lineno_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\v' || c == '\f'; }

std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_space(line[i])) ++i;
    std::size_t j = i;
    while (j < line.size() && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::int64_t to_int(std::string_view tok, int line) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseFailure{line, "expected integer, got '" + std::string(tok) + "'"};
  return v;
}

class Parser {
 public:
  explicit Parser(ParseResult& r) : res_(r) {}

  Formula run(std::string_view text) {
    LineReader lr(text);
    std::string_view line;
    while (lr.next(line)) {
      int ln = lr.lineno();
      auto toks = tokens(line);
      if (toks.empty()) continue;
      if (toks[0] == "c" || toks[0][0] == 'c') continue;
      if (toks[0] == "p") {
        header(toks, ln);
        continue;
      }
      if (!have_header_) throw ParseFailure{ln, "missing 'p cnf' header"};
      if (toks[0] == "a" || toks[0] == "e" || toks[0] == "d") {
        if (in_matrix_) throw ParseFailure{ln, "quantifier line after clauses"};
        quantifier(toks, ln);
        continue;
      }
      clause_tokens(toks, ln);
    }
    if (!have_header_) throw ParseFailure{lr.lineno(), "missing 'p cnf' header"};
    if (!pending_.empty()) throw ParseFailure{lr.lineno(), "clause not terminated by 0"};
    if (clauses_seen_ != declared_clauses_)
      warn(lr.lineno(), "header declares " + std::to_string(declared_clauses_) +
                            " clauses, found " + std::to_string(clauses_seen_));
    return std::move(f_);
  }

 private:
  void warn(int line, std::string msg) {
    res_.diagnostics.push_back({line, std::move(msg), ParseDiagnostic::Severity::Warning});
  }

  void header(const std::vector<std::string_view>& toks, int ln) {
    if (have_header_) throw ParseFailure{ln, "duplicate header"};
    if (toks.size() != 4 || toks[1] != "cnf") throw ParseFailure{ln, "malformed header"};
    std::int64_t nv = to_int(toks[2], ln), nc = to_int(toks[3], ln);
    if (nv < 0 || nc < 0 || nv > (1 << 28)) throw ParseFailure{ln, "malformed header"};
    max_var_ = static_cast<Var>(nv);
    declared_clauses_ = nc;
    f_.reserve_var(max_var_);
    have_header_ = true;
  }

  Var var_of(std::string_view tok, int ln, bool allow_neg) {
    std::int64_t v = to_int(tok, ln);
    if (v < 0 && !allow_neg) throw ParseFailure{ln, "negative variable in quantifier line"};
    std::int64_t a = v < 0 ? -v : v;
    if (a > static_cast<std::int64_t>(max_var_))
      throw ParseFailure{ln, "variable " + std::to_string(a) + " exceeds maxvar"};
    return static_cast<Var>(a);
  }

  void quantifier(const std::vector<std::string_view>& toks, int ln) {
    if (toks.size() < 2 || toks.back() != "0") throw ParseFailure{ln, "quantifier line not terminated by 0"};
    std::vector<Var> vs;
    for (std::size_t i = 1; i + 1 < toks.size(); ++i) {
      Var v = var_of(toks[i], ln, false);
      if (v == 0) throw ParseFailure{ln, "unexpected 0 in quantifier line"};
      vs.push_back(v);
    }
    try {
      if (toks[0] == "a") {
        for (Var v : vs) f_.prefix().add_universal(v);
      } else if (toks[0] == "e") {
        for (Var v : vs) f_.prefix().add_existential(v, f_.prefix().universals());
      } else {
        if (vs.empty()) throw ParseFailure{ln, "'d' line without variable"};
        DependencySet deps;
        for (std::size_t i = 1; i < vs.size(); ++i) {
          if (!f_.prefix().is_universal(vs[i]))
            throw ParseFailure{ln, "dependency " + std::to_string(vs[i]) + " is not a universal"};
          deps.insert(vs[i]);
        }
        f_.prefix().add_existential(vs[0], std::move(deps));
      }
    } catch (const FormulaError& e) {
      throw ParseFailure{ln, e.what()};
    }
  }

  void clause_tokens(const std::vector<std::string_view>& toks, int ln) {
    in_matrix_ = true;
    for (auto tok : toks) {
      std::int64_t v = to_int(tok, ln);
      if (v == 0) {
        finish_clause(ln);
        continue;
      }
      Var a = var_of(tok, ln, true);
      if (!f_.prefix().contains(a))
        throw ParseFailure{ln, "free variable " + std::to_string(a)};
      pending_.push_back(Lit{a, v < 0});
    }
  }

  void finish_clause(int ln) {
    ++clauses_seen_;
    std::size_t raw = pending_.size();
    Clause c(std::move(pending_));
    pending_.clear();
    if (c.size() != raw) {
      ++res_.duplicate_literals;
      warn(ln, "duplicate literal removed");
    }
    if (c.is_tautology()) {
      ++res_.tautologies_dropped;
      warn(ln, "tautological clause dropped");
      return;
    }
    f_.add_clause(std::move(c));
  }

  ParseResult& res_;
  Formula f_;
  bool have_header_ = false;
  bool in_matrix_ = false;
  Var max_var_ = 0;
  std::int64_t declared_clauses_ = 0;
  std::int64_t clauses_seen_ = 0;
  std::vector<Lit> pending_;
};

}  // namespace

std::string ParseResult::error() const {
  for (const auto& d : diagnostics)
    if (d.severity == ParseDiagnostic::Severity::Error)
      return "line " + std::to_string(d.line) + ": " + d.message;
  return {};
}

ParseResult parse_dqdimacs(std::string_view text) {
  ParseResult res;
  try {
    Parser p(res);
    res.formula = p.run(text);
  } catch (const ParseFailure& e) {
    res.formula.reset();
    res.diagnostics.push_back({e.line, e.message, ParseDiagnostic::Severity::Error});
  }
  return res;
}

std::string serialize_dqdimacs(const Formula& f) {
  std::ostringstream os;
  os << "p cnf " << f.max_var() << ' ' << f.num_active() << '\n';
  const Prefix& p = f.prefix();
  if (!p.universals().empty()) {
    os << 'a';
    for (Var u : p.universals()) os << ' ' << u;
    os << " 0\n";
  }
  for (const auto& [y, deps] : p.existentials()) {
    os << "d " << y;
    for (Var u : deps) os << ' ' << u;
    os << " 0\n";
  }
  for (ClauseId id : f.active_ids()) {
    for (Lit l : f.clause(id)) os << l.to_int() << ' ';
    os << "0\n";
  }
  return os.str();
}

}  // namespace dqbf
