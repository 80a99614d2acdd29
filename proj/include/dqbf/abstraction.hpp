// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <ostream>
#include <vector>

#include "dqbf/formula.hpp"
#include "dqbf/lattice.hpp"
#include "dqbf/sat.hpp"

namespace dqbf {

struct ClauseSplit {
  Clause lt;  // literals over exdep(Y)
  Clause eq;  // literals over Y
  Clause gt;  // everything else
};

ClauseSplit split_clause(const Clause& c, const VarSet& y, const VarSet& exdep_y);

// Values of clause satisfaction variables, keyed by clause id.
using ClauseValues = std::map<ClauseId, bool>;

struct NodeSolveResult {
  sat::Status status = sat::Status::Sat;
  Assignment model;              // node variables, on Sat
  std::vector<ClauseId> core;    // clause ids of failed s assumptions, on Unsat
  bool core_has_vars = false;    // a node-variable assumption is in the core
};

class NodeAbstraction {
 public:
  // exdep is only consulted for existential nodes; bound is bound(node).
  NodeAbstraction(const Node& node, VarSet exdep, VarSet bound, std::uint64_t seed = 0);

  const Node& node() const { return node_; }
  bool existential() const { return node_.kind == NodeKind::Existential; }

  void add_matrix_clause(ClauseId id, const Clause& c);
  // Adopts a grown scope after fresh variables were added. Existing clauses
  // must not mention the new variables.
  void extend(const Node& node, VarSet exdep, VarSet bound);

  ClauseValues prj_exists(const Assignment& alpha_v) const;
  ClauseValues prj_forall(const Assignment& alpha_v) const;

  NodeSolveResult solve(const Assignment& alpha_y, const ClauseValues& alpha_s);

  // Persistent: kept across reset() and replayed by the engine after rebuilds.
  void refine_existential(const std::vector<ClauseId>& core);
  // Reset-scoped; clause ids without a satisfaction variable get an
  // unconstrained one.
  void refine_universal(const std::vector<ClauseId>& witness);
  // Universal nodes: registers a literal set as a refinement item and returns
  // its id. Items equal to a matrix clause share that clause's id.
  ClauseId add_item(const Clause& item);
  static bool is_item(ClauseId id) { return (id & kItemBit) != 0; }
  // Matrix clause or item behind an id.
  const Clause& clause_of(ClauseId id) const;
  // Rebuilds the SAT instance without reset-scoped refinements.
  void reset();

  bool has_s(ClauseId id) const;
  bool has_a(ClauseId id) const;
  const ClauseSplit& split(ClauseId id) const { return info_.at(id).split; }
  // C_i restricted to the node's own variables.
  const Clause& own_part(ClauseId id) const { return is_item(id) ? items_.at(id).own : info_.at(id).own; }
  bool knows(ClauseId id) const { return info_.count(id) != 0 || items_.count(id) != 0; }
  const std::vector<std::vector<ClauseId>>& existential_refinements() const { return ex_refinements_; }
  const std::vector<std::vector<ClauseId>>& universal_refinements() const { return un_refinements_; }

  void set_phase(Var v, bool value);
  void set_self_check(bool on);
  const sat::SolverStats& sat_stats() const { return solver_->stats(); }
  std::uint64_t sat_calls() const { return sat_calls_; }

  // Human-readable encoding followed by the raw DIMACS of the instance.
  void write_dump(std::ostream& os) const;

 private:
  static constexpr ClauseId kItemBit = 0x80000000u;

  struct ClauseInfo {
    Clause clause;
    ClauseSplit split;  // existential nodes
    Clause own;         // C|_vars
    Clause bound_part;  // C|_bound
    int s = 0;          // sat variable, 0 if absent
    int a = 0;
  };

  void rebuild();
  void encode(ClauseId id, ClauseInfo& info);
  int sat_var(Var v);
  int lit(Lit l);
  int ensure_s(ClauseId id);

  Node node_;
  VarSet exdep_;
  VarSet bound_;
  std::uint64_t seed_;
  bool self_check_ = false;
  std::unique_ptr<sat::Solver> solver_;
  std::map<Var, int> var_map_;
  std::map<int, Var> var_back_;
  std::map<ClauseId, ClauseInfo> info_;
  std::map<int, ClauseId> s_back_;
  std::map<ClauseId, ClauseInfo> items_;
  std::map<Clause, ClauseId> item_ids_;
  std::map<Clause, ClauseId> matrix_ids_;
  std::map<Var, bool> phases_;
  std::vector<std::vector<ClauseId>> ex_refinements_;
  std::vector<std::vector<ClauseId>> un_refinements_;
  std::uint64_t sat_calls_ = 0;
};

}  // namespace dqbf
