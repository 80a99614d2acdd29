// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "dqbf/formula.hpp"

namespace dqbf {

enum class NodeKind { Universal, Existential };

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::Existential;
  VarSet vars;
  DependencySet dep;  // existential nodes only
  int level = 0;
};

struct Level {
  NodeKind kind = NodeKind::Existential;
  std::vector<int> nodes;
};

struct Violation {
  std::string property;  // "single-binding" .. "unique-maximum"
  std::string detail;
};

std::vector<DependencySet> close_under_intersection(std::vector<DependencySet> sets);

class SolverStructure {
 public:
  SolverStructure() = default;

  static SolverStructure build(const Prefix& prefix);
  // Assembles a structure from explicit levels; used to construct broken
  // structures in tests.
  static SolverStructure from_levels(std::vector<Level> levels, std::vector<Node> nodes);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Level>& levels() const { return levels_; }
  const Node& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int maximal_node() const { return maximal_; }
  const std::vector<DependencySet>& lattice() const { return lattice_; }

  // Variables bound at strictly smaller levels.
  const VarSet& bound_forall(int id) const { return bound_forall_.at(static_cast<std::size_t>(id)); }
  const VarSet& bound_exists(int id) const { return bound_exists_.at(static_cast<std::size_t>(id)); }
  VarSet bound(int id) const { return bound_forall(id).unite(bound_exists(id)); }

  // -1 when v is not bound by any node.
  int node_of_var(Var v) const;
  // -1 when no existential node has exactly this dependency set.
  int find_existential(const DependencySet& h) const;

  // Returns the node whose dependency set is h, rebuilding from the prefix
  // when h is not yet a lattice element. Newly added existentials with an
  // existing dependency set join the matching node in place.
  int node_for_dep(const Prefix& prefix, const DependencySet& h, bool* rebuilt = nullptr);

  std::string dump() const;

 private:
  void compute_bounds();

  std::vector<Node> nodes_;
  std::vector<Level> levels_;
  std::vector<DependencySet> lattice_;
  std::vector<VarSet> bound_forall_;
  std::vector<VarSet> bound_exists_;
  int maximal_ = -1;
};

std::vector<Violation> validate(const SolverStructure& s, const Prefix& prefix);

}  // namespace dqbf
