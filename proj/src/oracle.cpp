// SPDX-License-Identifier: MIT
#include "dqbf/oracle.hpp"

#include <algorithm>

#include "dqbf/sat.hpp"

namespace dqbf {

Expansion expand(const Formula& f, std::size_t max_universals) {
  const Prefix& p = f.prefix();
  const std::vector<Var>& us = p.universals().vars();
  if (us.size() > max_universals)
    throw OracleError("expansion bound exceeded: " + std::to_string(us.size()) + " universals");
  Expansion e;
  e.num_vars = static_cast<int>(f.max_var());
  auto copy_of = [&](Var y, std::uint64_t beta) {
    std::uint64_t key = 0;
    int bit = 0;
    for (Var u : p.deps(y)) {
      auto idx = static_cast<std::size_t>(std::lower_bound(us.begin(), us.end(), u) - us.begin());
      if ((beta >> idx) & 1u) key |= std::uint64_t{1} << bit;
      ++bit;
    }
    auto [it, fresh] = e.copies.try_emplace({y, key}, 0);
    if (fresh) it->second = ++e.num_vars;
    return it->second;
  };
  const std::vector<ClauseId> ids = f.active_ids();
  for (std::uint64_t beta = 0; beta < (std::uint64_t{1} << us.size()); ++beta) {
    for (ClauseId id : ids) {
      std::vector<int> out;
      bool satisfied = false;
      for (Lit l : f.clause(id)) {
        if (p.is_universal(l.var)) {
          auto idx = static_cast<std::size_t>(std::lower_bound(us.begin(), us.end(), l.var) - us.begin());
          bool val = (beta >> idx) & 1u;
          if (val != l.neg) {
            satisfied = true;
            break;
          }
          continue;
        }
        int c = copy_of(l.var, beta);
        out.push_back(l.neg ? -c : c);
      }
      if (!satisfied) e.clauses.push_back(std::move(out));
    }
  }
  return e;
}

bool oracle_solve(const Formula& f, std::size_t max_universals) {
  Expansion e = expand(f, max_universals);
  sat::Solver s;
  while (s.num_vars() < e.num_vars) s.new_var();
  for (const auto& c : e.clauses)
    if (!s.add_clause(c)) return false;
  return s.solve() == sat::Status::Sat;
}

bool is_linear(const Prefix& prefix) {
  std::vector<DependencySet> deps;
  for (const auto& [y, h] : prefix.existentials()) deps.push_back(h);
  for (std::size_t i = 0; i < deps.size(); ++i)
    for (std::size_t j = i + 1; j < deps.size(); ++j)
      if (!deps[i].comparable(deps[j])) return false;
  return true;
}

namespace {

struct GameTree {
  const Formula& f;
  std::vector<ClauseId> ids;
  std::vector<std::pair<Var, bool>> order;  // (var, is_universal)
  Assignment a;

  Truth status() const {
    bool all = true;
    for (ClauseId id : ids) {
      Truth t = eval_clause(f.clause(id), a);
      if (t == Truth::False) return Truth::False;
      if (t == Truth::Undef) all = false;
    }
    return all ? Truth::True : Truth::Undef;
  }

  bool eval(std::size_t k) {
    Truth t = status();
    if (t != Truth::Undef) return t == Truth::True;
    auto [v, uni] = order[k];
    bool result = uni;
    for (bool val : {false, true}) {
      a.set(v, val);
      bool sub = eval(k + 1);
      if (uni && !sub) result = false;
      if (!uni && sub) result = true;
      if (result != uni) break;
    }
    a.unset(v);
    return result;
  }
};

}  // namespace

bool game_tree_eval(const Formula& f) {
  const Prefix& p = f.prefix();
  if (!is_linear(p)) throw OracleError("game-tree evaluation needs a linear prefix");
  std::vector<std::pair<Var, DependencySet>> es(p.existentials().begin(), p.existentials().end());
  std::stable_sort(es.begin(), es.end(), [](const auto& a, const auto& b) { return a.second.size() < b.second.size(); });
  GameTree g{f, f.active_ids(), {}, {}};
  VarSet placed;
  for (const auto& [y, h] : es) {
    for (Var u : h.minus(placed)) g.order.emplace_back(u, true);
    placed = placed.unite(h);
    g.order.emplace_back(y, false);
  }
  for (Var u : p.universals().minus(placed)) g.order.emplace_back(u, true);
  return g.eval(0);
}

}  // namespace dqbf
