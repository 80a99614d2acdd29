// SPDX-License-Identifier: MIT
#include "dqbf/formula.hpp"

#include <algorithm>
#include <sstream>

namespace dqbf {

VarSet::VarSet(std::initializer_list<Var> vs) : VarSet(std::vector<Var>(vs)) {}

VarSet::VarSet(std::vector<Var> vs) : vars_(std::move(vs)) {
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
}

bool VarSet::contains(Var v) const {
  return std::binary_search(vars_.begin(), vars_.end(), v);
}

void VarSet::insert(Var v) {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it == vars_.end() || *it != v) vars_.insert(it, v);
}

void VarSet::erase(Var v) {
  auto it = std::lower_bound(vars_.begin(), vars_.end(), v);
  if (it != vars_.end() && *it == v) vars_.erase(it);
}

bool VarSet::subset_of(const VarSet& o) const {
  return std::includes(o.vars_.begin(), o.vars_.end(), vars_.begin(), vars_.end());
}

VarSet VarSet::unite(const VarSet& o) const {
  VarSet r;
  std::set_union(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(),
                 std::back_inserter(r.vars_));
  return r;
}

VarSet VarSet::intersect(const VarSet& o) const {
  VarSet r;
  std::set_intersection(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(),
                        std::back_inserter(r.vars_));
  return r;
}

VarSet VarSet::minus(const VarSet& o) const {
  VarSet r;
  std::set_difference(vars_.begin(), vars_.end(), o.vars_.begin(), o.vars_.end(),
                      std::back_inserter(r.vars_));
  return r;
}

std::string VarSet::str() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < vars_.size(); ++i) os << (i ? "," : "") << vars_[i];
  os << '}';
  return os.str();
}

Clause::Clause(std::initializer_list<Lit> lits) : Clause(std::vector<Lit>(lits)) {}

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  std::sort(lits_.begin(), lits_.end());
  lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

Clause Clause::from_ints(std::initializer_list<int> lits) {
  std::vector<Lit> v;
  for (int l : lits) v.push_back(Lit::from_int(l));
  return Clause(std::move(v));
}

bool Clause::contains(Lit l) const {
  return std::binary_search(lits_.begin(), lits_.end(), l);
}

bool Clause::is_tautology() const {
  for (std::size_t i = 1; i < lits_.size(); ++i)
    if (lits_[i].var == lits_[i - 1].var) return true;
  return false;
}

VarSet Clause::vars() const {
  std::vector<Var> v;
  for (Lit l : lits_) v.push_back(l.var);
  return VarSet(std::move(v));
}

std::string Clause::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < lits_.size(); ++i) os << (i ? " " : "") << lits_[i].to_int();
  os << ')';
  return os.str();
}

void Prefix::add_universal(Var v) {
  if (contains(v)) throw FormulaError("variable " + std::to_string(v) + " quantified twice");
  universals_.insert(v);
}

void Prefix::add_existential(Var v, DependencySet deps) {
  if (contains(v)) throw FormulaError("variable " + std::to_string(v) + " quantified twice");
  for (Var u : deps)
    if (!is_universal(u))
      throw FormulaError("dependency " + std::to_string(u) + " of " + std::to_string(v) +
                         " is not universal");
  existentials_.emplace(v, std::move(deps));
}

const DependencySet& Prefix::deps(Var y) const {
  auto it = existentials_.find(y);
  if (it == existentials_.end())
    throw FormulaError("variable " + std::to_string(y) + " is not existential");
  return it->second;
}

ClauseId Formula::add_clause(Clause c) {
  for (Lit l : c) reserve_var(l.var);
  clauses_.push_back(std::move(c));
  active_.push_back(true);
  return static_cast<ClauseId>(clauses_.size() - 1);
}

std::size_t Formula::num_active() const {
  return static_cast<std::size_t>(std::count(active_.begin(), active_.end(), true));
}

std::vector<ClauseId> Formula::active_ids() const {
  std::vector<ClauseId> ids;
  for (ClauseId i = 0; i < clauses_.size(); ++i)
    if (active_[i]) ids.push_back(i);
  return ids;
}

bool Formula::structurally_equal(const Formula& o) const {
  if (!(prefix_ == o.prefix_) || max_var_ != o.max_var_) return false;
  auto a = active_ids(), b = o.active_ids();
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (clauses_[a[i]] != o.clauses_[b[i]]) return false;
  return true;
}

void Assignment::set(Var v, bool b) {
  if (v >= vals_.size()) vals_.resize(v + 1, Truth::Undef);
  vals_[v] = b ? Truth::True : Truth::False;
}

Truth Assignment::eval(Lit l) const {
  Truth t = get(l.var);
  if (t == Truth::Undef) return t;
  return (t == Truth::True) != l.neg ? Truth::True : Truth::False;
}

Assignment Assignment::updated(const Assignment& o) const {
  Assignment r = *this;
  r.update(o);
  return r;
}

void Assignment::update(const Assignment& o) {
  for (Var v = 0; v < o.vals_.size(); ++v)
    if (o.vals_[v] != Truth::Undef) set(v, o.vals_[v] == Truth::True);
}

bool Assignment::below(const Assignment& o) const {
  for (Var v = 0; v < vals_.size(); ++v)
    if (vals_[v] != Truth::Undef && o.get(v) != vals_[v]) return false;
  return true;
}

Assignment Assignment::restricted(const VarSet& vs) const {
  Assignment r;
  for (Var v : vs)
    if (defined(v)) r.set(v, get(v) == Truth::True);
  return r;
}

std::vector<Var> Assignment::domain() const {
  std::vector<Var> d;
  for (Var v = 0; v < vals_.size(); ++v)
    if (vals_[v] != Truth::Undef) d.push_back(v);
  return d;
}

bool Assignment::empty() const { return domain().empty(); }

bool operator==(const Assignment& a, const Assignment& b) { return a.below(b) && b.below(a); }

DependencySet dep(Lit l, const Prefix& p) {
  if (p.is_universal(l.var)) return DependencySet{l.var};
  if (p.is_existential(l.var)) return p.deps(l.var);
  throw FormulaError("unknown variable " + std::to_string(l.var));
}

DependencySet dep_clause(const Clause& c, const Prefix& p) {
  DependencySet d;
  for (Lit l : c) d = d.unite(dep(l, p));
  return d;
}

VarSet exdep(const VarSet& ys, const Prefix& p) {
  VarSet r;
  for (Var y : ys) {
    const DependencySet& h = p.deps(y);
    r = r.unite(h);
    for (const auto& [y2, h2] : p.existentials())
      if (h2.strict_subset_of(h)) r.insert(y2);
  }
  return r;
}

Clause restrict_clause(const Clause& c, const VarSet& vs) {
  std::vector<Lit> out;
  for (Lit l : c)
    if (vs.contains(l.var)) out.push_back(l);
  return Clause(std::move(out));
}

Clause universal_reduce(const Clause& c, const Prefix& p) {
  DependencySet exdeps;
  for (Lit l : c)
    if (p.is_existential(l.var)) exdeps = exdeps.unite(p.deps(l.var));
  std::vector<Lit> out;
  for (Lit l : c)
    if (!p.is_universal(l.var) || exdeps.contains(l.var)) out.push_back(l);
  return Clause(std::move(out));
}

Truth eval_clause(const Clause& c, const Assignment& a) {
  bool undef = false;
  for (Lit l : c) {
    Truth t = a.eval(l);
    if (t == Truth::True) return Truth::True;
    if (t == Truth::Undef) undef = true;
  }
  return undef ? Truth::Undef : Truth::False;
}

}  // namespace dqbf
