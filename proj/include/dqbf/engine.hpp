// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dqbf/abstraction.hpp"
#include "dqbf/formula.hpp"
#include "dqbf/lattice.hpp"

namespace dqbf {

struct EngineOptions {
  bool strong_fex = true;
  std::uint64_t max_conflicts = 0;  // 0: unlimited
  std::uint64_t seed = 0;
  std::string dump_dir;             // empty: no per-node dumps
  std::map<Var, bool> phases;       // decision phase hints, test hook
  bool trace = false;
  bool self_check = false;
};

enum class Verdict { Sat, Unsat, Unknown };

struct EngineResult {
  Verdict verdict = Verdict::Unknown;
  std::string reason;  // set for Unknown
};

struct EngineStats {
  std::uint64_t iterations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t unsat_refinements = 0;
  std::uint64_t sat_refinements = 0;
  std::uint64_t fex_applications = 0;
  std::uint64_t sfex_applications = 0;
  std::uint64_t fresh_vars = 0;
  std::uint64_t consistency_resets = 0;
  std::uint64_t stale_entry_resets = 0;
  std::uint64_t entries_learned = 0;
  std::uint64_t structure_rebuilds = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t preprocess_tautologies = 0;
  std::uint64_t preprocess_reduced = 0;
  std::map<int, std::uint64_t> refinements_per_node;
};

enum class TraceKind {
  NodeSat,          // node, assignment
  NodeUnsat,        // node, ids = failed s assumptions
  ConflictClause,   // node = origin, clause
  ForkElimination,  // clauses, vars
  RefineExistential,
  RefineUniversal,  // node, ids, items
  LearnEntry,       // node, condition, assignment
  Reset,
  Result,
};

struct TraceEvent {
  explicit TraceEvent(TraceKind k) : kind(k) {}
  TraceKind kind;
  int node = -1;
  std::vector<ClauseId> ids;
  Clause clause;
  std::vector<Clause> clauses;
  std::vector<std::pair<Var, DependencySet>> vars;
  Assignment assignment;
  Assignment condition;
  std::vector<Clause> items;
  std::string text;
};

// The node answers `recorded` whenever its dependencies take the values in
// `condition`.
struct ConsistencyEntry {
  Assignment condition;
  Assignment recorded;
};

class Engine {
 public:
  explicit Engine(Formula f, EngineOptions opts = {});
  ~Engine();

  EngineResult solve();

  const EngineStats& stats() const { return stats_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  const Formula& formula() const { return f_; }
  const SolverStructure& structure() const { return s_; }
  const std::vector<ConsistencyEntry>& entries(int node) const;

 private:
  enum class Step { CandidateFound, Conflict, Result };
  struct StepResult {
    Step step;
    int level = 0;
    bool sat = false;
  };
  struct Visit {
    Assignment alpha_y;
    bool valid = false;
  };

  bool preprocess();
  void rebuild_abstractions();
  NodeAbstraction& abs(int node);
  VarSet exdep_of(const Node& n) const;

  StepResult solve_level(int lvl);
  StepResult solve_exists(int node);
  StepResult solve_forall(int node);
  StepResult refine_unsat(const std::vector<ClauseId>& core, int node);
  StepResult refine_sat(std::vector<Clause> witness, int start_level);

  Assignment check_consistency(int node) const;
  bool fully_informed(int node) const;
  void learn_entry(int node);
  void reset_consistency();
  void clear_from_level(int lvl);
  void dump_abstractions() const;
  void record(TraceEvent e);

  Formula f_;
  EngineOptions opts_;
  SolverStructure s_;
  std::vector<std::unique_ptr<NodeAbstraction>> abs_;
  std::vector<std::vector<ConsistencyEntry>> entries_;
  std::vector<Visit> last_;
  std::map<DependencySet, std::vector<std::vector<ClauseId>>> persistent_;
  Assignment alpha_v_;
  EngineStats stats_;
  std::vector<TraceEvent> trace_;
  std::uint64_t retired_sat_calls_ = 0;
};

EngineResult solve_dqbf(const Formula& f, const EngineOptions& opts = {}, EngineStats* stats = nullptr);

}  // namespace dqbf
