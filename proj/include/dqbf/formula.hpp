// SPDX-License-Identifier: MIT
#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqbf {

using Var = std::uint32_t;

class FormulaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Lit {
  Var var = 0;
  bool neg = false;

  static Lit from_int(int v) { return Lit{static_cast<Var>(v < 0 ? -v : v), v < 0}; }
  int to_int() const { return neg ? -static_cast<int>(var) : static_cast<int>(var); }
  Lit operator~() const { return Lit{var, !neg}; }

  friend bool operator==(Lit a, Lit b) { return a.var == b.var && a.neg == b.neg; }
  friend bool operator<(Lit a, Lit b) {
    return a.var != b.var ? a.var < b.var : (!a.neg && b.neg);
  }
};

// Sorted, duplicate-free set of variables.
class VarSet {
 public:
  VarSet() = default;
  VarSet(std::initializer_list<Var> vs);
  explicit VarSet(std::vector<Var> vs);

  bool contains(Var v) const;
  void insert(Var v);
  void erase(Var v);
  bool empty() const { return vars_.empty(); }
  std::size_t size() const { return vars_.size(); }
  const std::vector<Var>& vars() const { return vars_; }
  auto begin() const { return vars_.begin(); }
  auto end() const { return vars_.end(); }

  bool subset_of(const VarSet& o) const;
  bool strict_subset_of(const VarSet& o) const { return size() < o.size() && subset_of(o); }
  bool comparable(const VarSet& o) const { return subset_of(o) || o.subset_of(*this); }

  VarSet unite(const VarSet& o) const;
  VarSet intersect(const VarSet& o) const;
  VarSet minus(const VarSet& o) const;

  std::string str() const;

  friend bool operator==(const VarSet& a, const VarSet& b) { return a.vars_ == b.vars_; }
  friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }
  friend bool operator<(const VarSet& a, const VarSet& b) { return a.vars_ < b.vars_; }

 private:
  std::vector<Var> vars_;
};

using DependencySet = VarSet;

// Literals sorted by variable then polarity, no duplicates.
class Clause {
 public:
  Clause() = default;
  Clause(std::initializer_list<Lit> lits);
  explicit Clause(std::vector<Lit> lits);
  static Clause from_ints(std::initializer_list<int> lits);

  const std::vector<Lit>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  bool contains(Lit l) const;
  bool is_tautology() const;
  VarSet vars() const;
  std::string str() const;

  friend bool operator==(const Clause& a, const Clause& b) { return a.lits_ == b.lits_; }
  friend bool operator!=(const Clause& a, const Clause& b) { return !(a == b); }
  friend bool operator<(const Clause& a, const Clause& b) { return a.lits_ < b.lits_; }

 private:
  std::vector<Lit> lits_;
};

class Prefix {
 public:
  void add_universal(Var v);
  void add_existential(Var v, DependencySet deps);

  bool is_universal(Var v) const { return universals_.contains(v); }
  bool is_existential(Var v) const { return existentials_.count(v) != 0; }
  bool contains(Var v) const { return is_universal(v) || is_existential(v); }
  const DependencySet& deps(Var y) const;

  const VarSet& universals() const { return universals_; }
  const std::map<Var, DependencySet>& existentials() const { return existentials_; }

  friend bool operator==(const Prefix& a, const Prefix& b) {
    return a.universals_ == b.universals_ && a.existentials_ == b.existentials_;
  }

 private:
  VarSet universals_;
  std::map<Var, DependencySet> existentials_;
};

using ClauseId = std::uint32_t;

class Formula {
 public:
  Prefix& prefix() { return prefix_; }
  const Prefix& prefix() const { return prefix_; }

  // Appends a clause; ids are never reused.
  ClauseId add_clause(Clause c);
  void deactivate(ClauseId id) { active_.at(id) = false; }
  bool active(ClauseId id) const { return active_.at(id); }
  const Clause& clause(ClauseId id) const { return clauses_.at(id); }
  std::size_t num_clauses() const { return clauses_.size(); }
  std::size_t num_active() const;
  std::vector<ClauseId> active_ids() const;

  Var max_var() const { return max_var_; }
  void reserve_var(Var v) { if (v > max_var_) max_var_ = v; }
  Var fresh_var() { return ++max_var_; }

  // Same prefix, same max var and the same active clauses in order.
  bool structurally_equal(const Formula& o) const;

 private:
  Prefix prefix_;
  std::vector<Clause> clauses_;
  std::vector<bool> active_;
  Var max_var_ = 0;
};

enum class Truth : std::int8_t { False = 0, True = 1, Undef = 2 };

// Partial assignment, indexed by variable id.
class Assignment {
 public:
  Truth get(Var v) const { return v < vals_.size() ? vals_[v] : Truth::Undef; }
  bool defined(Var v) const { return get(v) != Truth::Undef; }
  void set(Var v, bool b);
  void unset(Var v) { if (v < vals_.size()) vals_[v] = Truth::Undef; }
  void clear() { vals_.clear(); }
  Truth eval(Lit l) const;

  // this ⊔ o: o wins on shared keys.
  Assignment updated(const Assignment& o) const;
  void update(const Assignment& o);
  // this ⊑ o
  bool below(const Assignment& o) const;
  Assignment restricted(const VarSet& vs) const;
  std::vector<Var> domain() const;
  bool empty() const;

  friend bool operator==(const Assignment& a, const Assignment& b);

 private:
  std::vector<Truth> vals_;
};

DependencySet dep(Lit l, const Prefix& p);
DependencySet dep_clause(const Clause& c, const Prefix& p);
VarSet exdep(const VarSet& ys, const Prefix& p);
Clause restrict_clause(const Clause& c, const VarSet& vs);
Clause universal_reduce(const Clause& c, const Prefix& p);
Truth eval_clause(const Clause& c, const Assignment& a);

}  // namespace dqbf
