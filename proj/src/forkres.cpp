// SPDX-License-Identifier: MIT
#include "dqbf/forkres.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <string>

namespace dqbf {

std::string DependencyCycle::str() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < literals.size(); ++i) {
    os << (i ? " " : "") << literals[i].to_int();
  }
  os << " via";
  for (const auto& s : intersections) os << ' ' << s.str();
  return os.str();
}

CycleError::CycleError(DependencyCycle c)
    : std::runtime_error("dependency cycle: " + c.str()), cycle_(std::move(c)) {}

namespace {

std::vector<DependencySet> maximal_of(const std::vector<DependencySet>& sets) {
  std::vector<DependencySet> out;
  for (const auto& a : sets) {
    bool top = true;
    for (const auto& b : sets) top = top && !a.strict_subset_of(b);
    if (top && std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Sizes of the maximal elements, largest first. Compared lexicographically
// this is the multiset ordering.
std::vector<std::size_t> measure(const Clause& c, const Prefix& p) {
  std::vector<std::size_t> m;
  for (const auto& h : clause_poset(c, p).maximal) m.push_back(h.size());
  std::sort(m.rbegin(), m.rend());
  return m;
}

Prefix without_universal(const Prefix& p, Var x) {
  Prefix q;
  for (Var u : p.universals()) q.add_universal(u);
  for (const auto& [y, h] : p.existentials()) {
    DependencySet d = h;
    d.erase(x);
    q.add_existential(y, d);
  }
  return q;
}

}  // namespace

ClausePoset clause_poset(const Clause& c, const Prefix& prefix) {
  std::set<DependencySet> elems;
  for (Lit l : c)
    if (prefix.is_existential(l.var)) elems.insert(prefix.deps(l.var));
  ClausePoset p;
  p.elements.assign(elems.begin(), elems.end());
  p.maximal = maximal_of(p.elements);
  return p;
}

bool has_fork(const Clause& c, const Prefix& prefix) { return clause_poset(c, prefix).has_fork(); }

std::optional<DependencyCycle> find_dependency_cycle(const Clause& c, const Prefix& prefix, std::size_t limit,
                                                     bool* truncated) {
  if (truncated) *truncated = false;
  std::vector<DependencySet> sets;
  std::vector<Lit> reps;
  for (Lit l : c) {
    if (!prefix.is_existential(l.var)) continue;
    const DependencySet& h = prefix.deps(l.var);
    if (std::find(sets.begin(), sets.end(), h) != sets.end()) continue;
    sets.push_back(h);
    reps.push_back(l);
  }
  if (sets.size() > limit) {
    if (truncated) *truncated = true;
    return std::nullopt;
  }
  const std::size_t m = sets.size();
  std::vector<std::size_t> path;
  std::vector<DependencySet> inters;
  std::vector<bool> on_path(m, false);
  std::optional<DependencyCycle> found;

  auto incomparable_to_all = [&](const DependencySet& s) {
    for (const auto& t : inters)
      if (s.comparable(t)) return false;
    return true;
  };

  std::function<bool(std::size_t)> dfs = [&](std::size_t cur) -> bool {
    for (std::size_t nxt = path.front() + 1; nxt < m; ++nxt) {
      if (on_path[nxt]) continue;
      DependencySet i = sets[cur].intersect(sets[nxt]);
      if (i.empty() || !incomparable_to_all(i)) continue;
      path.push_back(nxt);
      on_path[nxt] = true;
      inters.push_back(i);
      if (path.size() >= 3) {
        DependencySet close = sets[nxt].intersect(sets[path.front()]);
        if (!close.empty() && incomparable_to_all(close)) {
          DependencyCycle cyc;
          for (std::size_t k : path) cyc.literals.push_back(reps[k]);
          cyc.intersections = inters;
          cyc.intersections.push_back(close);
          found = std::move(cyc);
          return true;
        }
      }
      if (dfs(nxt)) return true;
      inters.pop_back();
      on_path[nxt] = false;
      path.pop_back();
    }
    return false;
  };

  for (std::size_t s = 0; s < m && !found; ++s) {
    path.assign(1, s);
    on_path.assign(m, false);
    on_path[s] = true;
    inters.clear();
    dfs(s);
  }
  return found;
}

std::optional<std::pair<Clause, Clause>> unique_meet_split(const Clause& c, const Prefix& prefix) {
  ClausePoset poset = clause_poset(c, prefix);
  if (!poset.has_fork()) return std::nullopt;
  for (const auto& h : poset.maximal) {
    std::vector<DependencySet> inters;
    for (const auto& o : poset.maximal)
      if (o != h) inters.push_back(h.intersect(o));
    std::vector<DependencySet> top = maximal_of(inters);
    if (top.size() != 1) continue;
    const DependencySet& hstar = top.front();
    std::vector<Lit> c1, c2;
    for (Lit l : c) {
      bool left;
      if (prefix.is_existential(l.var)) {
        const DependencySet& d = prefix.deps(l.var);
        left = d.subset_of(h) && !d.subset_of(hstar);
      } else {
        left = h.contains(l.var) && !hstar.contains(l.var);
      }
      (left ? c1 : c2).push_back(l);
    }
    return std::make_pair(Clause(std::move(c1)), Clause(std::move(c2)));
  }
  return std::nullopt;
}

std::optional<std::pair<Clause, Clause>> choose_split(const Clause& c, const Prefix& prefix) {
  if (!has_fork(c, prefix)) throw std::invalid_argument("choose_split: clause has no information fork");
  if (find_dependency_cycle(c, prefix)) return std::nullopt;
  return unique_meet_split(c, prefix);
}

namespace {

bool has_existential(const Clause& c, const Prefix& p) {
  for (Lit l : c)
    if (p.is_existential(l.var)) return true;
  return false;
}

Clause with(const Clause& c, std::initializer_list<Lit> extra) {
  std::vector<Lit> v = c.lits();
  v.insert(v.end(), extra.begin(), extra.end());
  return Clause(std::move(v));
}

}  // namespace

ExtensionResult fork_extension(const Clause& c1, const Clause& c2, Var fresh, const Prefix& prefix) {
  if (!has_existential(c1, prefix) || !has_existential(c2, prefix))
    throw std::invalid_argument("fork_extension: split is not proper");
  DependencySet d = dep_clause(c1, prefix).intersect(dep_clause(c2, prefix));
  return {with(c1, {Lit{fresh, false}}), with(c2, {Lit{fresh, true}}), d};
}

ExtensionResult strong_fork_extension(const Clause& c1, const Clause& c2, const Clause& cx, Var fresh,
                                      const Prefix& prefix) {
  for (Lit l : cx)
    if (!prefix.is_universal(l.var) || c1.vars().contains(l.var) || c2.vars().contains(l.var))
      throw std::invalid_argument("strong_fork_extension: C_X must be fresh universal literals");
  DependencySet d = dep_clause(c1, prefix).intersect(dep_clause(c2, prefix)).minus(dep_clause(cx, prefix));
  std::vector<Lit> a = cx.lits(), b = cx.lits();
  a.insert(a.end(), c1.begin(), c1.end());
  a.push_back(Lit{fresh, false});
  b.insert(b.end(), c2.begin(), c2.end());
  b.push_back(Lit{fresh, true});
  return {Clause(std::move(a)), Clause(std::move(b)), d};
}

namespace {

struct SfexPlan {
  Clause base;
  std::vector<Clause> branches;
  Clause c1, c2;
};

// Fallback split: everything under one maximal element H that contains x
// goes left.
std::pair<Clause, Clause> cover_split(const Clause& base, const DependencySet& h, const Prefix& p) {
  std::vector<Lit> c1, c2;
  for (Lit l : base) {
    bool left = p.is_existential(l.var) ? p.deps(l.var).subset_of(h) : h.contains(l.var);
    (left ? c1 : c2).push_back(l);
  }
  return {Clause(std::move(c1)), Clause(std::move(c2))};
}

SfexPlan plan_sfex(const Clause& c, const Prefix& prefix, const std::optional<DependencyCycle>& cyc) {
  ClausePoset poset = clause_poset(c, prefix);
  std::vector<Var> candidates;
  DependencySet anchor;
  if (cyc) {
    candidates = cyc->intersections.front().vars();
    anchor = prefix.deps(cyc->literals.front().var);
  } else {
    for (std::size_t i = 0; i < poset.maximal.size() && candidates.empty(); ++i)
      for (std::size_t j = i + 1; j < poset.maximal.size() && candidates.empty(); ++j) {
        DependencySet s = poset.maximal[i].intersect(poset.maximal[j]);
        if (!s.empty()) {
          candidates = s.vars();
          anchor = poset.maximal[i];
        }
      }
  }
  if (candidates.empty()) throw std::logic_error("strong fork extension: no breaking universal");

  auto plan_for = [&](Var x) {
    SfexPlan plan;
    std::vector<Lit> rest;
    std::optional<Lit> lx;
    for (Lit l : c) {
      if (l.var == x)
        lx = l;
      else
        rest.push_back(l);
    }
    plan.base = Clause(std::move(rest));
    if (lx)
      plan.branches = {Clause{*lx}};
    else
      plan.branches = {Clause{Lit{x, false}}, Clause{Lit{x, true}}};
    return plan;
  };

  Var probe_var = 1;
  for (Var u : prefix.universals()) probe_var = std::max(probe_var, u + 1);
  for (const auto& [e, h] : prefix.existentials()) probe_var = std::max(probe_var, e + 1);
  for (Lit l : c) probe_var = std::max(probe_var, l.var + 1);
  const std::vector<std::size_t> before = measure(c, prefix);
  auto decreases = [&](const SfexPlan& plan) {
    for (const Clause& cx : plan.branches) {
      ExtensionResult r = strong_fork_extension(plan.c1, plan.c2, cx, probe_var, prefix);
      Prefix q = prefix;
      q.add_existential(probe_var, r.dep);
      for (const Clause* out : {&r.first, &r.second})
        if (!(measure(universal_reduce(*out, q), q) < before)) return false;
    }
    return true;
  };

  for (Var x : candidates) {
    SfexPlan plan = plan_for(x);
    Prefix reduced = without_universal(prefix, x);
    if (!has_fork(plan.base, reduced)) continue;
    auto split = choose_split(plan.base, reduced);
    if (!split) continue;
    plan.c1 = split->first;
    plan.c2 = split->second;
    if (has_existential(plan.c1, prefix) && has_existential(plan.c2, prefix) && decreases(plan)) return plan;
  }

  Var x = candidates.front();
  SfexPlan plan = plan_for(x);
  DependencySet h;
  for (const auto& m : poset.maximal)
    if (anchor.subset_of(m)) {
      h = m;
      break;
    }
  auto [c1, c2] = cover_split(plan.base, h, prefix);
  plan.c1 = std::move(c1);
  plan.c2 = std::move(c2);
  return plan;
}

}  // namespace

ForkElimination eliminate_forks(const Clause& c, Prefix& prefix, const std::function<Var()>& fresh,
                                bool strong_enabled) {
  ForkElimination res;
  std::vector<Clause> work{universal_reduce(c, prefix)};
  while (!work.empty()) {
    Clause cur = std::move(work.back());
    work.pop_back();
    if (!has_fork(cur, prefix)) {
      res.clauses.push_back(std::move(cur));
      continue;
    }
    std::vector<std::size_t> before = measure(cur, prefix);
    std::vector<Clause> produced;

    bool truncated = false;
    std::optional<DependencyCycle> cyc = find_dependency_cycle(cur, prefix, 16, &truncated);
    std::optional<std::pair<Clause, Clause>> split;
    if (!cyc) split = unique_meet_split(cur, prefix);

    if (split) {
      Var y = fresh();
      ExtensionResult r = fork_extension(split->first, split->second, y, prefix);
      prefix.add_existential(y, r.dep);
      res.new_vars.emplace_back(y, r.dep);
      produced = {r.first, r.second};
      ++res.fex_steps;
    } else {
      if (!strong_enabled) {
        if (!cyc) throw std::logic_error("fork without cycle witness could not be split");
        throw CycleError(*cyc);
      }
      SfexPlan plan = plan_sfex(cur, prefix, cyc);
      for (const Clause& cx : plan.branches) {
        Var y = fresh();
        ExtensionResult r = strong_fork_extension(plan.c1, plan.c2, cx, y, prefix);
        prefix.add_existential(y, r.dep);
        res.new_vars.emplace_back(y, r.dep);
        produced.push_back(r.first);
        produced.push_back(r.second);
      }
      ++res.sfex_steps;
    }
    for (Clause& p : produced) {
      Clause red = universal_reduce(p, prefix);
      if (!(measure(red, prefix) < before))
        throw std::logic_error("fork elimination did not decrease the clause measure");
      work.push_back(std::move(red));
    }
  }
  std::reverse(res.clauses.begin(), res.clauses.end());
  return res;
}

bool is_multi_linear(const Prefix& prefix) {
  std::vector<DependencySet> deps;
  for (const auto& [y, h] : prefix.existentials()) deps.push_back(h);
  for (std::size_t i = 0; i < deps.size(); ++i)
    for (std::size_t j = i + 1; j < deps.size(); ++j)
      if (!deps[i].comparable(deps[j]) && !deps[i].intersect(deps[j]).empty()) return false;
  return true;
}

}  // namespace dqbf
