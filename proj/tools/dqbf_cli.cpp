// SPDX-License-Identifier: MIT
#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "dqbf/dqdimacs.hpp"
#include "dqbf/engine.hpp"
#include "dqbf/forkres.hpp"
#include "dqbf/lattice.hpp"
#include "dqbf/oracle.hpp"

namespace {

struct CliConfig {
  std::string input = "-";
  bool oracle = false;
  bool no_strong_fex = false;
  std::uint64_t max_conflicts = 0;
  std::uint64_t seed = 0;
  bool stats = false;
  bool print_structure = false;
  bool check_multilinear = false;
  std::string dump_dir;
  int verbosity = 0;
};

void print_comment_block(std::ostream& os, const std::string& text) {
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) os << "c " << line << '\n';
}

const char* kind_name(dqbf::TraceKind k) {
  using dqbf::TraceKind;
  switch (k) {
    case TraceKind::NodeSat: return "sat";
    case TraceKind::NodeUnsat: return "unsat";
    case TraceKind::ConflictClause: return "conflict";
    case TraceKind::ForkElimination: return "fork-elimination";
    case TraceKind::RefineExistential: return "refine-exists";
    case TraceKind::RefineUniversal: return "refine-forall";
    case TraceKind::LearnEntry: return "entry";
    case TraceKind::Reset: return "reset";
    case TraceKind::Result: return "result";
  }
  return "?";
}

void print_trace(const dqbf::Engine& e) {
  for (const dqbf::TraceEvent& t : e.trace()) {
    std::cerr << "c trace " << kind_name(t.kind);
    if (t.node >= 0) std::cerr << " node " << t.node;
    if (!t.ids.empty()) {
      std::cerr << " ids";
      for (auto id : t.ids) std::cerr << ' ' << id;
    }
    if (!t.clause.empty()) std::cerr << " clause " << t.clause.str();
    for (const auto& c : t.clauses) std::cerr << " + " << c.str();
    for (const auto& [v, d] : t.vars) std::cerr << " new " << v << ' ' << d.str();
    for (auto v : t.assignment.domain())
      std::cerr << ' ' << (t.assignment.get(v) == dqbf::Truth::True ? "" : "-") << v;
    if (!t.text.empty()) std::cerr << ' ' << t.text;
    std::cerr << '\n';
  }
}

void print_stats(std::ostream& os, const dqbf::EngineStats& s) {
  os << "c stats iterations " << s.iterations << '\n'
     << "c stats conflicts " << s.conflicts << '\n'
     << "c stats unsat-refinements " << s.unsat_refinements << '\n'
     << "c stats sat-refinements " << s.sat_refinements << '\n'
     << "c stats fex " << s.fex_applications << '\n'
     << "c stats strong-fex " << s.sfex_applications << '\n'
     << "c stats fresh-vars " << s.fresh_vars << '\n'
     << "c stats consistency-resets " << s.consistency_resets << '\n'
     << "c stats stale-entry-resets " << s.stale_entry_resets << '\n'
     << "c stats entries " << s.entries_learned << '\n'
     << "c stats structure-rebuilds " << s.structure_rebuilds << '\n'
     << "c stats sat-calls " << s.sat_calls << '\n';
  for (const auto& [node, n] : s.refinements_per_node) os << "c stats refinements node " << node << ' ' << n << '\n';
}

int run(int argc, char** argv) {
  CliConfig cfg;
  CLI::App app{"DQBF solver based on clausal abstraction"};
  app.add_option("input", cfg.input, "DQDIMACS file, '-' for stdin");
  app.add_flag("--oracle", cfg.oracle, "decide by universal expansion");
  app.add_flag("--no-strong-fex", cfg.no_strong_fex, "disable strong fork extension");
  app.add_option("--max-conflicts", cfg.max_conflicts, "give up after N conflicts (0: unlimited)");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_flag("--stats", cfg.stats, "print statistics");
  app.add_flag("--print-structure", cfg.print_structure, "print the dependency lattice and levels");
  app.add_flag("--check-multilinear", cfg.check_multilinear, "classify the prefix and exit");
  app.add_option("--dump-abstractions", cfg.dump_dir, "write per-node SAT instances to DIR");
  app.add_option("--verbosity,-v", cfg.verbosity, "0: quiet, 1: summary, 2: trace");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    return 1;
  }

  std::string text;
  if (cfg.input == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(cfg.input, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot read " << cfg.input << '\n';
      return 1;
    }
    text.assign(std::istreambuf_iterator<char>(in), {});
  }

  dqbf::ParseResult parsed = dqbf::parse_dqdimacs(text);
  for (const auto& d : parsed.diagnostics)
    if (d.severity == dqbf::ParseDiagnostic::Severity::Warning)
      std::cerr << "warning: line " << d.line << ": " << d.message << '\n';
  if (!parsed.ok()) {
    std::cerr << "error: " << parsed.error() << '\n';
    return 1;
  }
  const dqbf::Formula& f = *parsed.formula;

  if (cfg.check_multilinear) {
    std::cout << (dqbf::is_multi_linear(f.prefix()) ? "multi-linear" : "not multi-linear") << '\n';
    return 0;
  }
  if (cfg.print_structure) print_comment_block(std::cout, dqbf::SolverStructure::build(f.prefix()).dump());

  if (cfg.oracle) {
    if (cfg.no_strong_fex || cfg.max_conflicts || cfg.seed || !cfg.dump_dir.empty())
      std::cerr << "warning: engine options are ignored with --oracle\n";
    bool value = false;
    try {
      value = dqbf::oracle_solve(f);
    } catch (const dqbf::OracleError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    }
    std::cout << (value ? "s cnf 1" : "s cnf 0") << '\n';
    return value ? 10 : 20;
  }

  dqbf::EngineOptions opts;
  opts.strong_fex = !cfg.no_strong_fex;
  opts.max_conflicts = cfg.max_conflicts;
  opts.seed = cfg.seed;
  opts.dump_dir = cfg.dump_dir;
  opts.trace = cfg.verbosity >= 2;
  dqbf::Engine engine(f, opts);
  dqbf::EngineResult r;
  try {
    r = engine.solve();
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  if (cfg.verbosity >= 2) print_trace(engine);
  if (cfg.verbosity >= 1)
    std::cerr << "c formula " << f.prefix().universals().size() << " universals, " << f.prefix().existentials().size()
              << " existentials, " << f.num_active() << " clauses; after preprocessing "
              << engine.formula().num_active() << " clauses\n";
  if (cfg.stats) print_stats(std::cout, engine.stats());
  switch (r.verdict) {
    case dqbf::Verdict::Sat:
      std::cout << "s cnf 1\n";
      return 10;
    case dqbf::Verdict::Unsat:
      std::cout << "s cnf 0\n";
      return 20;
    case dqbf::Verdict::Unknown:
      break;
  }
  std::cout << "c reason " << r.reason << "\ns cnf -1\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
