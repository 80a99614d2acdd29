// SPDX-License-Identifier: MIT
#include "dqbf/abstraction.hpp"

#include <stdexcept>

namespace dqbf {

ClauseSplit split_clause(const Clause& c, const VarSet& y, const VarSet& exdep_y) {
  std::vector<Lit> lt, eq, gt;
  for (Lit l : c) {
    if (exdep_y.contains(l.var))
      lt.push_back(l);
    else if (y.contains(l.var))
      eq.push_back(l);
    else
      gt.push_back(l);
  }
  return {Clause(std::move(lt)), Clause(std::move(eq)), Clause(std::move(gt))};
}

NodeAbstraction::NodeAbstraction(const Node& node, VarSet exdep, VarSet bound, std::uint64_t seed)
    : node_(node), exdep_(std::move(exdep)), bound_(std::move(bound)), seed_(seed) {
  rebuild();
}

int NodeAbstraction::sat_var(Var v) {
  auto it = var_map_.find(v);
  if (it != var_map_.end()) return it->second;
  int s = solver_->new_var();
  var_map_[v] = s;
  var_back_[s] = v;
  auto ph = phases_.find(v);
  if (ph != phases_.end()) solver_->set_phase(s, ph->second);
  return s;
}

int NodeAbstraction::lit(Lit l) {
  int v = sat_var(l.var);
  return l.neg ? -v : v;
}

void NodeAbstraction::rebuild() {
  solver_ = std::make_unique<sat::Solver>(seed_);
  solver_->set_self_check(self_check_);
  if (!phases_.empty()) solver_->set_phase_saving(false);
  var_map_.clear();
  var_back_.clear();
  s_back_.clear();
  for (Var v : node_.vars) sat_var(v);
  for (auto& [id, info] : info_) {
    info.s = info.a = 0;
    encode(id, info);
  }
  for (const auto& r : ex_refinements_) {
    std::vector<int> cl;
    for (ClauseId id : r) cl.push_back(-info_.at(id).a);
    solver_->add_clause(cl);
  }
}

void NodeAbstraction::encode(ClauseId id, ClauseInfo& info) {
  if (existential()) {
    std::vector<int> cl;
    if (!info.split.lt.empty()) {
      info.s = solver_->new_var();
      s_back_[info.s] = id;
      cl.push_back(info.s);
    }
    if (!info.split.gt.empty()) {
      info.a = solver_->new_var();
      cl.push_back(info.a);
    }
    for (Lit l : info.split.eq) cl.push_back(lit(l));
    solver_->add_clause(cl);
    return;
  }
  if (info.own.empty()) return;
  info.s = solver_->new_var();
  s_back_[info.s] = id;
  for (Lit l : info.own) solver_->add_clause({info.s, -lit(l)});
}

void NodeAbstraction::add_matrix_clause(ClauseId id, const Clause& c) {
  ClauseInfo info;
  info.clause = c;
  if (existential()) info.split = split_clause(c, node_.vars, exdep_);
  info.own = restrict_clause(c, node_.vars);
  info.bound_part = restrict_clause(c, bound_);
  if (!existential()) matrix_ids_.emplace(c, id);
  ClauseInfo& slot = info_.insert_or_assign(id, std::move(info)).first->second;
  encode(id, slot);
}

void NodeAbstraction::extend(const Node& node, VarSet exdep, VarSet bound) {
  node_ = node;
  exdep_ = std::move(exdep);
  bound_ = std::move(bound);
  for (Var v : node_.vars) sat_var(v);
}

bool NodeAbstraction::has_s(ClauseId id) const {
  auto it = info_.find(id);
  return it != info_.end() && it->second.s != 0;
}

bool NodeAbstraction::has_a(ClauseId id) const {
  auto it = info_.find(id);
  return it != info_.end() && it->second.a != 0;
}

ClauseValues NodeAbstraction::prj_exists(const Assignment& alpha_v) const {
  ClauseValues out;
  for (const auto& [id, info] : info_) {
    if (!info.s) continue;
    Truth t = eval_clause(info.split.lt, alpha_v);
    if (t == Truth::Undef)
      throw std::logic_error("projection: dependency of clause " + std::to_string(id) + " unassigned");
    out[id] = t == Truth::True;
  }
  return out;
}

ClauseValues NodeAbstraction::prj_forall(const Assignment& alpha_v) const {
  ClauseValues out;
  for (const auto* m : {&info_, &items_})
    for (const auto& [id, info] : *m)
      if (info.s && eval_clause(info.bound_part, alpha_v) == Truth::True) out[id] = true;
  return out;
}

NodeSolveResult NodeAbstraction::solve(const Assignment& alpha_y, const ClauseValues& alpha_s) {
  std::vector<int> assumptions;
  for (Var v : node_.vars)
    if (alpha_y.defined(v)) assumptions.push_back(alpha_y.get(v) == Truth::True ? var_map_.at(v) : -var_map_.at(v));
  for (const auto& [id, val] : alpha_s) {
    const auto& m = is_item(id) ? items_ : info_;
    auto it = m.find(id);
    if (it == m.end() || !it->second.s) continue;
    assumptions.push_back(val ? it->second.s : -it->second.s);
  }
  ++sat_calls_;
  NodeSolveResult res;
  res.status = solver_->solve(assumptions);
  if (res.status == sat::Status::Sat) {
    for (Var v : node_.vars) res.model.set(v, solver_->model_value(var_map_.at(v)));
    return res;
  }
  for (int l : solver_->core()) {
    int v = l < 0 ? -l : l;
    auto it = s_back_.find(v);
    if (it != s_back_.end())
      res.core.push_back(it->second);
    else if (var_back_.count(v))
      res.core_has_vars = true;
  }
  return res;
}

void NodeAbstraction::refine_existential(const std::vector<ClauseId>& core) {
  std::vector<int> cl;
  for (ClauseId id : core) {
    auto it = info_.find(id);
    if (it == info_.end() || !it->second.a)
      throw std::logic_error("refinement at node " + std::to_string(node_.id) + ": clause " +
                             std::to_string(id) + " has no assumption variable");
    cl.push_back(-it->second.a);
  }
  ex_refinements_.push_back(core);
  solver_->add_clause(cl);
}

ClauseId NodeAbstraction::add_item(const Clause& item) {
  if (existential()) throw std::logic_error("refinement items belong to universal nodes");
  if (auto it = matrix_ids_.find(item); it != matrix_ids_.end()) return it->second;
  if (auto it = item_ids_.find(item); it != item_ids_.end()) return it->second;
  ClauseId id = kItemBit | static_cast<ClauseId>(items_.size());
  ClauseInfo info;
  info.clause = item;
  info.own = restrict_clause(item, node_.vars);
  info.bound_part = restrict_clause(item, bound_);
  info.s = solver_->new_var();
  s_back_[info.s] = id;
  for (Lit l : info.own) solver_->add_clause({info.s, -lit(l)});
  items_.emplace(id, std::move(info));
  item_ids_.emplace(item, id);
  return id;
}

const Clause& NodeAbstraction::clause_of(ClauseId id) const {
  return is_item(id) ? items_.at(id).clause : info_.at(id).clause;
}

int NodeAbstraction::ensure_s(ClauseId id) {
  ClauseInfo& info = is_item(id) ? items_.at(id) : info_.at(id);
  if (!info.s) {
    info.s = solver_->new_var();
    s_back_[info.s] = id;
  }
  return info.s;
}

void NodeAbstraction::refine_universal(const std::vector<ClauseId>& witness) {
  std::vector<int> cl;
  for (ClauseId id : witness) cl.push_back(-ensure_s(id));
  un_refinements_.push_back(witness);
  solver_->add_clause(cl);
}

void NodeAbstraction::reset() {
  un_refinements_.clear();
  items_.clear();
  item_ids_.clear();
  rebuild();
}

void NodeAbstraction::set_phase(Var v, bool value) {
  phases_[v] = value;
  solver_->set_phase_saving(false);
  auto it = var_map_.find(v);
  if (it != var_map_.end()) solver_->set_phase(it->second, value);
}

void NodeAbstraction::set_self_check(bool on) {
  self_check_ = on;
  solver_->set_self_check(on);
}

void NodeAbstraction::write_dump(std::ostream& os) const {
  os << "c node " << node_.id << (existential() ? " exists " : " forall ") << node_.vars.str();
  if (existential()) os << " dep " << node_.dep.str();
  os << '\n';
  for (const auto& [v, s] : var_map_) os << "c var " << v << " -> " << s << '\n';
  for (const auto& [id, info] : info_) {
    os << "c clause " << id << ' ' << info.clause.str();
    if (info.s) os << " s=" << info.s;
    if (info.a) os << " a=" << info.a;
    os << '\n';
  }
  for (const auto& r : ex_refinements_) {
    os << "c refine-exists";
    for (ClauseId id : r) os << ' ' << id;
    os << '\n';
  }
  for (const auto& [id, info] : items_) os << "c item " << (id & ~kItemBit) << ' ' << info.clause.str() << " s=" << info.s << '\n';
  for (const auto& r : un_refinements_) {
    os << "c refine-forall";
    for (ClauseId id : r) os << ' ' << id;
    os << '\n';
  }
  solver_->write_dimacs(os);
}

}  // namespace dqbf
