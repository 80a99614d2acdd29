// SPDX-License-Identifier: MIT
#include "dqbf/engine.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "dqbf/forkres.hpp"

namespace dqbf {

Engine::Engine(Formula f, EngineOptions opts) : f_(std::move(f)), opts_(std::move(opts)) {}

Engine::~Engine() = default;

const std::vector<ConsistencyEntry>& Engine::entries(int node) const {
  static const std::vector<ConsistencyEntry> none;
  if (node < 0 || static_cast<std::size_t>(node) >= entries_.size()) return none;
  return entries_[static_cast<std::size_t>(node)];
}

void Engine::record(TraceEvent e) {
  if (opts_.trace) trace_.push_back(std::move(e));
}

VarSet Engine::exdep_of(const Node& n) const {
  VarSet out = n.dep;
  for (const auto& [y, d] : f_.prefix().existentials())
    if (d.strict_subset_of(n.dep)) out.insert(y);
  return out;
}

// Tautologies are dropped, clauses universally reduced and forks eliminated.
// Returns false when an empty clause shows up.
bool Engine::preprocess() {
  auto fresh = [this] { return f_.fresh_var(); };
  for (ClauseId id : f_.active_ids()) {
    const Clause c = f_.clause(id);
    if (c.is_tautology()) {
      f_.deactivate(id);
      ++stats_.preprocess_tautologies;
      continue;
    }
    Clause r = universal_reduce(c, f_.prefix());
    if (r.empty()) return false;
    if (has_fork(r, f_.prefix())) {
      ForkElimination el = eliminate_forks(r, f_.prefix(), fresh, opts_.strong_fex);
      f_.deactivate(id);
      std::vector<ClauseId> added;
    for (const Clause& d : el.clauses) added.push_back(f_.add_clause(d));
      stats_.fex_applications += el.fex_steps;
      stats_.sfex_applications += el.sfex_steps;
      stats_.fresh_vars += el.new_vars.size();
      TraceEvent e{TraceKind::ForkElimination};
      e.clause = r;
      e.clauses = el.clauses;
      e.vars = el.new_vars;
      e.text = "preprocess";
      record(std::move(e));
    } else if (!(r == c)) {
      f_.deactivate(id);
      f_.add_clause(r);
      ++stats_.preprocess_reduced;
    }
  }
  return true;
}

void Engine::rebuild_abstractions() {
  for (const auto& a : abs_)
    if (a) retired_sat_calls_ += a->sat_calls();
  abs_.clear();
  abs_.resize(s_.nodes().size());
  entries_.assign(s_.nodes().size(), {});
  last_.assign(s_.nodes().size(), {});
}

NodeAbstraction& Engine::abs(int id) {
  auto& slot = abs_.at(static_cast<std::size_t>(id));
  if (slot) return *slot;
  const Node& n = s_.node(id);
  VarSet ex = n.kind == NodeKind::Existential ? exdep_of(n) : VarSet{};
  std::uint64_t seed = opts_.seed == 0 ? 0 : opts_.seed + static_cast<std::uint64_t>(id);
  slot = std::make_unique<NodeAbstraction>(n, ex, s_.bound(id), seed);
  slot->set_self_check(opts_.self_check);
  for (const auto& [v, b] : opts_.phases)
    if (n.vars.contains(v)) slot->set_phase(v, b);
  for (ClauseId cid : f_.active_ids()) slot->add_matrix_clause(cid, f_.clause(cid));
  if (n.kind == NodeKind::Existential) {
    auto it = persistent_.find(n.dep);
    if (it != persistent_.end())
      for (const auto& core : it->second) slot->refine_existential(core);
  }
  return *slot;
}

void Engine::clear_from_level(int lvl) {
  for (std::size_t l = static_cast<std::size_t>(lvl); l < s_.levels().size(); ++l)
    for (int id : s_.levels()[l].nodes) {
      for (Var v : s_.node(id).vars) alpha_v_.unset(v);
      last_[static_cast<std::size_t>(id)].valid = false;
    }
}

bool Engine::fully_informed(int id) const {
  const Node& n = s_.node(id);
  return n.kind == NodeKind::Existential && !n.dep.strict_subset_of(s_.bound_forall(id));
}

Assignment Engine::check_consistency(int id) const {
  const auto& es = entries_[static_cast<std::size_t>(id)];
  if (es.empty()) return {};
  Assignment here = alpha_v_.restricted(s_.node(id).dep);
  for (const ConsistencyEntry& e : es)
    if (e.condition == here) return e.recorded;
  return {};
}

void Engine::learn_entry(int id) {
  const Visit& v = last_[static_cast<std::size_t>(id)];
  if (!v.valid) throw std::logic_error("consistency: node " + std::to_string(id) + " not visited");
  ConsistencyEntry e{alpha_v_.restricted(s_.node(id).dep), v.alpha_y};
  auto& es = entries_[static_cast<std::size_t>(id)];
  for (const ConsistencyEntry& old : es)
    if (old.condition == e.condition) {
      if (!(old.recorded == e.recorded)) throw std::logic_error("consistency: conflicting entries");
      return;
    }
  ++stats_.entries_learned;
  TraceEvent t{TraceKind::LearnEntry};
  t.node = id;
  t.condition = e.condition;
  t.assignment = e.recorded;
  record(std::move(t));
  es.push_back(std::move(e));
}

void Engine::reset_consistency() {
  ++stats_.consistency_resets;
  for (auto& es : entries_) es.clear();
  for (std::size_t i = 0; i < abs_.size(); ++i)
    if (abs_[i] && !abs_[i]->existential()) abs_[i]->reset();
  record(TraceEvent{TraceKind::Reset});
}

Engine::StepResult Engine::solve_level(int lvl) {
  if (static_cast<std::size_t>(lvl) >= s_.levels().size())
    throw std::logic_error("engine: level " + std::to_string(lvl) + " past the last level");
  const Level& L = s_.levels()[static_cast<std::size_t>(lvl)];
  if (L.kind == NodeKind::Universal) return solve_forall(L.nodes.front());
  for (int id : L.nodes) {
    StepResult r = solve_exists(id);
    if (r.step != Step::CandidateFound) return r;
  }
  return {Step::CandidateFound};
}

Engine::StepResult Engine::solve_exists(int id) {
  NodeAbstraction& a = abs(id);
  Assignment alpha_y = check_consistency(id);
  ClauseValues alpha_s = a.prj_exists(alpha_v_);
  NodeSolveResult res = a.solve(alpha_y, alpha_s);
  if (res.status == sat::Status::Unsat && res.core_has_vars) {
    // the recorded assignment is blocked; explain the conflict on S alone
    NodeSolveResult plain = a.solve({}, alpha_s);
    if (plain.status == sat::Status::Sat) {
      ++stats_.stale_entry_resets;
      reset_consistency();
    }
    res = std::move(plain);
  }
  if (res.status == sat::Status::Unsat) {
    TraceEvent t{TraceKind::NodeUnsat};
    t.node = id;
    t.ids = res.core;
    record(std::move(t));
    return refine_unsat(res.core, id);
  }
  alpha_v_.update(res.model);
  Visit& v = last_[static_cast<std::size_t>(id)];
  v.alpha_y = res.model;
  v.valid = true;
  TraceEvent t{TraceKind::NodeSat};
  t.node = id;
  t.assignment = res.model;
  record(std::move(t));
  if (id == s_.maximal_node()) {
    std::vector<Clause> witness;
    for (const auto& [cid, val] : alpha_s)
      if (val) witness.push_back(f_.clause(cid));
    ++stats_.conflicts;
    return refine_sat(std::move(witness), s_.node(id).level);
  }
  return {Step::CandidateFound};
}

Engine::StepResult Engine::solve_forall(int id) {
  NodeAbstraction& a = abs(id);
  ClauseValues alpha_s = a.prj_forall(alpha_v_);
  NodeSolveResult res = a.solve({}, alpha_s);
  if (res.status == sat::Status::Unsat) {
    TraceEvent t{TraceKind::NodeUnsat};
    t.node = id;
    t.ids = res.core;
    record(std::move(t));
    ++stats_.conflicts;
    std::vector<Clause> witness;
    for (ClauseId cid : res.core) witness.push_back(a.clause_of(cid));
    return refine_sat(std::move(witness), s_.node(id).level - 1);
  }
  alpha_v_.update(res.model);
  last_[static_cast<std::size_t>(id)].alpha_y = res.model;
  last_[static_cast<std::size_t>(id)].valid = true;
  TraceEvent t{TraceKind::NodeSat};
  t.node = id;
  t.assignment = res.model;
  record(std::move(t));
  return {Step::CandidateFound};
}

Engine::StepResult Engine::refine_unsat(const std::vector<ClauseId>& core, int id) {
  ++stats_.conflicts;
  const VarSet bound = s_.bound(id);
  std::vector<Lit> lits;
  for (ClauseId cid : core)
    for (Lit l : restrict_clause(f_.clause(cid), bound)) lits.push_back(l);
  Clause conflict = universal_reduce(Clause(std::move(lits)), f_.prefix());
  {
    TraceEvent t{TraceKind::ConflictClause};
    t.node = id;
    t.ids = core;
    t.clause = conflict;
    record(std::move(t));
  }

  if (has_fork(conflict, f_.prefix())) {
    auto fresh = [this] { return f_.fresh_var(); };
    ForkElimination el = eliminate_forks(conflict, f_.prefix(), fresh, opts_.strong_fex);
    stats_.fex_applications += el.fex_steps;
    stats_.sfex_applications += el.sfex_steps;
    stats_.fresh_vars += el.new_vars.size();
    bool rebuilt = false;
    for (const auto& [y, h] : el.new_vars) {
      bool r = false;
      s_.node_for_dep(f_.prefix(), h, &r);
      rebuilt = rebuilt || r;
    }
    std::vector<ClauseId> added;
    for (const Clause& d : el.clauses) added.push_back(f_.add_clause(d));
    TraceEvent t{TraceKind::ForkElimination};
    t.node = id;
    t.clause = conflict;
    t.clauses = el.clauses;
    t.vars = el.new_vars;
    record(std::move(t));
    if (rebuilt) {
      ++stats_.structure_rebuilds;
      rebuild_abstractions();
    } else {
      for (std::size_t i = 0; i < abs_.size(); ++i) {
        if (!abs_[i]) continue;
        const Node& n = s_.node(static_cast<int>(i));
        abs_[i]->extend(n, n.kind == NodeKind::Existential ? exdep_of(n) : VarSet{}, s_.bound(n.id));
        for (const auto& [v, b] : opts_.phases)
          if (n.vars.contains(v)) abs_[i]->set_phase(v, b);
        for (ClauseId cid : added) abs_[i]->add_matrix_clause(cid, f_.clause(cid));
      }
      last_.assign(s_.nodes().size(), {});
    }
    alpha_v_.clear();
    reset_consistency();
    return {Step::Conflict, 0};
  }

  int target = -1;
  for (int lvl = s_.node(id).level - 1; lvl >= 0 && target < 0; --lvl) {
    const Level& L = s_.levels()[static_cast<std::size_t>(lvl)];
    if (L.kind != NodeKind::Existential) continue;
    for (int n : L.nodes) {
      const VarSet& y = s_.node(n).vars;
      if (std::any_of(conflict.begin(), conflict.end(), [&](Lit l) { return y.contains(l.var); })) {
        target = n;
        break;
      }
    }
  }
  if (target < 0) return {Step::Result, 0, false};
  abs(target).refine_existential(core);
  persistent_[s_.node(target).dep].push_back(core);
  ++stats_.unsat_refinements;
  ++stats_.refinements_per_node[target];
  TraceEvent t{TraceKind::RefineExistential};
  t.node = target;
  t.ids = core;
  record(std::move(t));
  return {Step::Conflict, s_.node(target).level};
}

// Walks down from start_level. Existential nodes fix their answer, by entry
// when they see more universals than they depend on, and drop the witness
// items they satisfy; a fixed answer adds its dependency values as unit items.
// The first universal level with a literal in some item is refined.
Engine::StepResult Engine::refine_sat(std::vector<Clause> witness, int start_level) {
  for (int lvl = start_level; lvl >= 0; --lvl) {
    const Level& L = s_.levels()[static_cast<std::size_t>(lvl)];
    if (L.kind == NodeKind::Existential) {
      for (int n : L.nodes) {
        const Node& node = s_.node(n);
        const Assignment& ay = last_[static_cast<std::size_t>(n)].alpha_y;
        std::erase_if(witness, [&](const Clause& c) { return eval_clause(restrict_clause(c, node.vars), ay) == Truth::True; });
        if (fully_informed(n)) continue;
        learn_entry(n);
        for (Var x : node.dep) witness.push_back(Clause{Lit{x, alpha_v_.get(x) == Truth::False}});
      }
      std::sort(witness.begin(), witness.end());
      witness.erase(std::unique(witness.begin(), witness.end()), witness.end());
      continue;
    }
    int u = L.nodes.front();
    const VarSet& xs = s_.node(u).vars;
    bool touches = std::any_of(witness.begin(), witness.end(), [&](const Clause& c) {
      return std::any_of(c.begin(), c.end(), [&](Lit l) { return xs.contains(l.var); });
    });
    if (!touches) continue;
    NodeAbstraction& a = abs(u);
    std::vector<ClauseId> ids;
    for (const Clause& c : witness) ids.push_back(a.add_item(c));
    a.refine_universal(ids);
    ++stats_.sat_refinements;
    ++stats_.refinements_per_node[u];
    TraceEvent t{TraceKind::RefineUniversal};
    t.node = u;
    t.ids = ids;
    t.items = witness;
    record(std::move(t));
    return {Step::Conflict, lvl};
  }
  return {Step::Result, 0, true};
}

void Engine::dump_abstractions() const {
  if (opts_.dump_dir.empty()) return;
  std::filesystem::create_directories(opts_.dump_dir);
  for (std::size_t i = 0; i < abs_.size(); ++i) {
    if (!abs_[i]) continue;
    std::ofstream os(std::filesystem::path(opts_.dump_dir) / ("node" + std::to_string(i) + ".cnf"));
    abs_[i]->write_dump(os);
  }
}

EngineResult Engine::solve() {
  EngineResult out;
  auto finish = [&](Verdict v, std::string reason = {}) {
    out.verdict = v;
    out.reason = std::move(reason);
    stats_.sat_calls = retired_sat_calls_;
    for (const auto& a : abs_)
      if (a) stats_.sat_calls += a->sat_calls();
    TraceEvent t{TraceKind::Result};
    t.text = v == Verdict::Sat ? "sat" : v == Verdict::Unsat ? "unsat" : "unknown";
    record(std::move(t));
    dump_abstractions();
    return out;
  };

  try {
    if (!preprocess()) return finish(Verdict::Unsat);
    s_ = SolverStructure::build(f_.prefix());
    rebuild_abstractions();
    int lvl = 0;
    while (true) {
      ++stats_.iterations;
      StepResult r = solve_level(lvl);
      if (r.step == Step::CandidateFound) {
        ++lvl;
        continue;
      }
      if (r.step == Step::Result) return finish(r.sat ? Verdict::Sat : Verdict::Unsat);
      if (opts_.max_conflicts && stats_.conflicts >= opts_.max_conflicts) return finish(Verdict::Unknown, "conflict limit");
      lvl = r.level;
      clear_from_level(lvl);
    }
  } catch (const CycleError& e) {
    return finish(Verdict::Unknown, "dependency cycle " + e.cycle().str());
  }
}

EngineResult solve_dqbf(const Formula& f, const EngineOptions& opts, EngineStats* stats) {
  Engine e(f, opts);
  EngineResult r = e.solve();
  if (stats) *stats = e.stats();
  return r;
}

}  // namespace dqbf
