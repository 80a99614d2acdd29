// SPDX-License-Identifier: MIT
#include "dqbf/lattice.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace dqbf {

std::vector<DependencySet> close_under_intersection(std::vector<DependencySet> sets) {
  std::set<DependencySet> closed(sets.begin(), sets.end());
  std::vector<DependencySet> frontier(closed.begin(), closed.end());
  while (!frontier.empty()) {
    std::vector<DependencySet> next;
    std::vector<DependencySet> snapshot(closed.begin(), closed.end());
    for (const auto& a : frontier)
      for (const auto& b : snapshot) {
        DependencySet c = a.intersect(b);
        if (closed.insert(c).second) next.push_back(std::move(c));
      }
    frontier = std::move(next);
  }
  return {closed.begin(), closed.end()};
}

namespace {

bool lex_less(const DependencySet& a, const DependencySet& b) { return a.vars() < b.vars(); }

}  // namespace

SolverStructure SolverStructure::build(const Prefix& prefix) {
  std::vector<DependencySet> deps{DependencySet{}};
  for (const auto& [y, h] : prefix.existentials()) deps.push_back(h);
  std::vector<DependencySet> lattice = close_under_intersection(deps);

  auto unique_max = [&]() {
    for (const auto& h : lattice) {
      bool top = true;
      for (const auto& o : lattice) top = top && o.subset_of(h);
      if (top) return true;
    }
    return false;
  };
  if (!unique_max()) {
    lattice.push_back(prefix.universals());
    lattice = close_under_intersection(lattice);
  }

  std::vector<DependencySet> by_size = lattice;
  std::stable_sort(by_size.begin(), by_size.end(),
                   [](const DependencySet& a, const DependencySet& b) { return a.size() < b.size(); });
  std::map<DependencySet, int> depth;
  int max_depth = 0;
  for (const auto& h : by_size) {
    int d = 0;
    for (const auto& [o, od] : depth)
      if (o.strict_subset_of(h)) d = std::max(d, od + 1);
    depth[h] = d;
    max_depth = std::max(max_depth, d);
  }

  VarSet used;
  for (const auto& h : lattice) used = used.unite(h);
  VarSet unused = prefix.universals().minus(used);

  std::map<DependencySet, std::vector<Var>> members;
  for (const auto& [y, h] : prefix.existentials()) members[h].push_back(y);

  SolverStructure s;
  s.lattice_ = lattice;
  std::sort(s.lattice_.begin(), s.lattice_.end(), lex_less);

  auto add_existential_level = [&](const std::vector<DependencySet>& hs) {
    Level lv;
    lv.kind = NodeKind::Existential;
    for (const auto& h : hs) {
      Node n;
      n.id = static_cast<int>(s.nodes_.size());
      n.kind = NodeKind::Existential;
      n.dep = h;
      n.vars = VarSet(members[h]);
      n.level = static_cast<int>(s.levels_.size());
      lv.nodes.push_back(n.id);
      s.nodes_.push_back(std::move(n));
    }
    s.levels_.push_back(std::move(lv));
  };
  auto add_universal_level = [&](const VarSet& xs) {
    Node n;
    n.id = static_cast<int>(s.nodes_.size());
    n.kind = NodeKind::Universal;
    n.vars = xs;
    n.level = static_cast<int>(s.levels_.size());
    s.levels_.push_back(Level{NodeKind::Universal, {n.id}});
    s.nodes_.push_back(std::move(n));
  };

  add_existential_level({DependencySet{}});
  VarSet placed;
  for (int d = 1; d <= max_depth; ++d) {
    std::vector<DependencySet> hs;
    for (const auto& h : s.lattice_)
      if (depth[h] == d) hs.push_back(h);
    VarSet xs;
    for (const auto& h : hs) xs = xs.unite(h);
    xs = xs.minus(placed);
    if (d == max_depth) xs = xs.unite(unused);
    if (!xs.empty()) {
      add_universal_level(xs);
      placed = placed.unite(xs);
    }
    add_existential_level(hs);
  }
  if (max_depth == 0 && !unused.empty()) add_universal_level(unused);

  s.compute_bounds();
  return s;
}

SolverStructure SolverStructure::from_levels(std::vector<Level> levels, std::vector<Node> nodes) {
  SolverStructure s;
  s.levels_ = std::move(levels);
  s.nodes_ = std::move(nodes);
  for (std::size_t l = 0; l < s.levels_.size(); ++l)
    for (int id : s.levels_[l].nodes) s.nodes_.at(static_cast<std::size_t>(id)).level = static_cast<int>(l);
  for (const auto& n : s.nodes_)
    if (n.kind == NodeKind::Existential) s.lattice_.push_back(n.dep);
  std::sort(s.lattice_.begin(), s.lattice_.end(), lex_less);
  s.compute_bounds();
  return s;
}

void SolverStructure::compute_bounds() {
  bound_forall_.assign(nodes_.size(), VarSet{});
  bound_exists_.assign(nodes_.size(), VarSet{});
  VarSet fa, ex;
  for (const auto& lv : levels_) {
    for (int id : lv.nodes) {
      bound_forall_[static_cast<std::size_t>(id)] = fa;
      bound_exists_[static_cast<std::size_t>(id)] = ex;
    }
    for (int id : lv.nodes) {
      const Node& n = nodes_[static_cast<std::size_t>(id)];
      if (n.kind == NodeKind::Universal)
        fa = fa.unite(n.vars);
      else
        ex = ex.unite(n.vars);
    }
  }
  maximal_ = -1;
  for (const auto& n : nodes_) {
    if (n.kind != NodeKind::Existential) continue;
    bool top = true;
    for (const auto& o : nodes_)
      if (o.kind == NodeKind::Existential && o.id != n.id) top = top && o.dep.strict_subset_of(n.dep);
    if (top) {
      maximal_ = n.id;
      break;
    }
  }
}

int SolverStructure::node_of_var(Var v) const {
  for (const auto& n : nodes_)
    if (n.vars.contains(v)) return n.id;
  return -1;
}

int SolverStructure::find_existential(const DependencySet& h) const {
  for (const auto& n : nodes_)
    if (n.kind == NodeKind::Existential && n.dep == h) return n.id;
  return -1;
}

int SolverStructure::node_for_dep(const Prefix& prefix, const DependencySet& h, bool* rebuilt) {
  int id = find_existential(h);
  if (rebuilt) *rebuilt = id < 0;
  if (id < 0) {
    *this = build(prefix);
    return find_existential(h);
  }
  Node& n = nodes_[static_cast<std::size_t>(id)];
  for (const auto& [y, dy] : prefix.existentials())
    if (dy == h) n.vars.insert(y);
  compute_bounds();
  return id;
}

std::string SolverStructure::dump() const {
  std::ostringstream os;
  os << "lattice:";
  for (const auto& h : lattice_) os << ' ' << h.str();
  os << '\n';
  for (std::size_t l = 0; l < levels_.size(); ++l) {
    const Level& lv = levels_[l];
    os << "level " << l << (lv.kind == NodeKind::Universal ? " forall" : " exists") << '\n';
    for (int id : lv.nodes) {
      const Node& n = node(id);
      os << "  node " << n.id << " vars " << n.vars.str();
      if (n.kind == NodeKind::Existential) os << " dep " << n.dep.str();
      if (n.id == maximal_) os << " (maximal)";
      os << '\n';
    }
  }
  return os.str();
}

std::vector<Violation> validate(const SolverStructure& s, const Prefix& prefix) {
  std::vector<Violation> out;
  const auto& nodes = s.nodes();

  std::map<Var, int> count;
  for (const auto& n : nodes) {
    for (Var v : n.vars) {
      ++count[v];
      bool kind_ok = n.kind == NodeKind::Universal ? prefix.is_universal(v) : prefix.is_existential(v);
      if (!kind_ok)
        out.push_back({"single-binding", "variable " + std::to_string(v) + " bound by node " +
                                   std::to_string(n.id) + " of the wrong kind"});
      if (n.kind == NodeKind::Existential && prefix.is_existential(v) && prefix.deps(v) != n.dep)
        out.push_back({"single-binding", "variable " + std::to_string(v) + " has a different dependency set than node " +
                                   std::to_string(n.id)});
    }
  }
  auto check_once = [&](Var v) {
    int c = count.count(v) ? count[v] : 0;
    if (c != 1)
      out.push_back({"single-binding", "variable " + std::to_string(v) + " bound " + std::to_string(c) + " times"});
  };
  for (Var u : prefix.universals()) check_once(u);
  for (const auto& [y, h] : prefix.existentials()) check_once(y);

  for (const auto& lv : s.levels()) {
    if (lv.kind != NodeKind::Existential) continue;
    for (std::size_t i = 0; i < lv.nodes.size(); ++i)
      for (std::size_t j = i + 1; j < lv.nodes.size(); ++j) {
        const Node& a = s.node(lv.nodes[i]);
        const Node& b = s.node(lv.nodes[j]);
        if (a.dep.comparable(b.dep))
          out.push_back({"level-antichain", "nodes " + std::to_string(a.id) + " and " + std::to_string(b.id) +
                                     " share a level with comparable dependencies"});
      }
  }

  for (const auto& a : nodes)
    for (const auto& b : nodes) {
      if (a.kind != NodeKind::Existential || b.kind != NodeKind::Existential) continue;
      if (a.level < b.level && b.dep.subset_of(a.dep))
        out.push_back({"level-order", "node " + std::to_string(a.id) + " precedes node " + std::to_string(b.id) +
                                   " whose dependencies are not larger or incomparable"});
    }

  for (const auto& n : nodes)
    if (n.kind == NodeKind::Existential && !n.dep.subset_of(s.bound_forall(n.id)))
      out.push_back({"deps-bound", "node " + std::to_string(n.id) + " depends on unbound universals"});

  int tops = 0;
  for (const auto& n : nodes) {
    if (n.kind != NodeKind::Existential) continue;
    bool top = true;
    for (const auto& o : nodes)
      if (o.kind == NodeKind::Existential && o.id != n.id) top = top && o.dep.strict_subset_of(n.dep);
    if (top) ++tops;
  }
  if (tops != 1) out.push_back({"unique-maximum", "expected one maximal existential node, found " + std::to_string(tops)});

  return out;
}

}  // namespace dqbf
