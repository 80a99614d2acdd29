// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>

#include "dqbf/engine.hpp"
#include "dqbf/oracle.hpp"
#include "support.hpp"

using namespace dqbf;
namespace dt = dqbf::testing;

namespace {

const std::map<Var, bool> kTracePhases = {{1, true}, {2, false}, {3, false}, {4, false}, {6, true}};

Assignment assign(std::initializer_list<int> lits) {
  Assignment a;
  for (int l : lits) a.set(static_cast<Var>(std::abs(l)), l > 0);
  return a;
}

const TraceEvent* find_event(const std::vector<TraceEvent>& tr, TraceKind k, int node = -2) {
  for (const auto& e : tr)
    if (e.kind == k && (node == -2 || e.node == node)) return &e;
  return nullptr;
}

}  // namespace

TEST(Engine, TraceExampleIsTrue) {
  Formula f = dt::load(DQBF_TEST_DATA "/trace_example.dqdimacs");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EngineOptions o;
    o.seed = seed;
    o.self_check = true;
    EXPECT_EQ(solve_dqbf(f, o).verdict, Verdict::Sat) << seed;
  }
}

TEST(Engine, TraceExampleTrace) {
  Formula f = dt::load(DQBF_TEST_DATA "/trace_example.dqdimacs");
  EngineOptions o;
  o.trace = true;
  o.phases = kTracePhases;
  Engine e(f, o);
  ASSERT_EQ(e.solve().verdict, Verdict::Sat);
  const auto& tr = e.trace();

  const TraceEvent* unsat = find_event(tr, TraceKind::NodeUnsat);
  ASSERT_NE(unsat, nullptr);
  EXPECT_EQ(unsat->node, 4);
  std::vector<ClauseId> core = unsat->ids;
  std::sort(core.begin(), core.end());
  EXPECT_EQ(core, (std::vector<ClauseId>{1, 3}));

  const TraceEvent* conflict = find_event(tr, TraceKind::ConflictClause);
  ASSERT_NE(conflict, nullptr);
  EXPECT_EQ(conflict->clause, Clause::from_ints({-1, 3, 4}));

  const TraceEvent* fex = find_event(tr, TraceKind::ForkElimination);
  ASSERT_NE(fex, nullptr);
  ASSERT_EQ(fex->vars.size(), 1u);
  EXPECT_EQ(fex->vars[0].first, 6u);
  EXPECT_EQ(fex->vars[0].second, DependencySet{});
  EXPECT_EQ(fex->clauses, (std::vector<Clause>{Clause::from_ints({-1, 3, 6}), Clause::from_ints({4, -6})}));

  const TraceEvent* e2 = find_event(tr, TraceKind::LearnEntry, 2);
  ASSERT_NE(e2, nullptr);
  EXPECT_EQ(e2->condition, assign({1}));
  EXPECT_EQ(e2->assignment, assign({-3}));
  const TraceEvent* e3 = find_event(tr, TraceKind::LearnEntry, 3);
  ASSERT_NE(e3, nullptr);
  EXPECT_EQ(e3->condition, assign({-2}));
  EXPECT_EQ(e3->assignment, assign({4}));

  EXPECT_EQ(tr.back().kind, TraceKind::Result);
  EXPECT_EQ(e.stats().fex_applications, 1u);
  EXPECT_EQ(e.stats().fresh_vars, 1u);
  EXPECT_EQ(e.formula().prefix().deps(6), DependencySet{});
  EXPECT_FALSE(e.entries(3).empty());
}

TEST(Engine, ParityCycleIsFalse) {
  Formula f = dt::load(DQBF_TEST_DATA "/parity_cycle.dqdimacs");
  EngineStats st;
  EXPECT_EQ(solve_dqbf(f, {}, &st).verdict, Verdict::Unsat);
  EXPECT_GE(st.sfex_applications, 1u);
}

TEST(Engine, ParityCycleWithoutStrongFexIsUnknown) {
  Formula f = dt::load(DQBF_TEST_DATA "/parity_cycle.dqdimacs");
  EngineOptions o;
  o.strong_fex = false;
  EngineResult r = solve_dqbf(f, o);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
  EXPECT_EQ(r.reason.rfind("dependency cycle", 0), 0u) << r.reason;
}

TEST(Engine, TrivialFormulas) {
  Formula empty;
  EXPECT_EQ(solve_dqbf(empty).verdict, Verdict::Sat);

  Formula with_empty_clause;
  with_empty_clause.prefix().add_universal(1);
  with_empty_clause.add_clause(Clause{});
  EXPECT_EQ(solve_dqbf(with_empty_clause).verdict, Verdict::Unsat);

  Formula universal_only;
  universal_only.prefix().add_universal(1);
  universal_only.prefix().add_existential(2, {});
  universal_only.add_clause(Clause::from_ints({1, 2}));
  universal_only.add_clause(Clause::from_ints({1, -2}));
  EXPECT_EQ(solve_dqbf(universal_only).verdict, Verdict::Unsat);

  Formula propositional;
  propositional.prefix().add_existential(1, {});
  propositional.prefix().add_existential(2, {});
  propositional.add_clause(Clause::from_ints({1, 2}));
  propositional.add_clause(Clause::from_ints({-1}));
  EXPECT_EQ(solve_dqbf(propositional).verdict, Verdict::Sat);
  propositional.add_clause(Clause::from_ints({-2}));
  EXPECT_EQ(solve_dqbf(propositional).verdict, Verdict::Unsat);
}

TEST(Engine, ConflictLimit) {
  Formula f = dt::load(DQBF_TEST_DATA "/parity_cycle.dqdimacs");
  EngineOptions o;
  o.max_conflicts = 1;
  EngineResult r = solve_dqbf(f, o);
  EXPECT_EQ(r.verdict, Verdict::Unknown);
  EXPECT_EQ(r.reason, "conflict limit");
}

TEST(Engine, DumpsAbstractions) {
  auto dir = std::filesystem::temp_directory_path() / "dqbf_engine_dump";
  std::filesystem::remove_all(dir);
  Formula f = dt::load(DQBF_TEST_DATA "/trace_example.dqdimacs");
  EngineOptions o;
  o.dump_dir = dir.string();
  EXPECT_EQ(solve_dqbf(f, o).verdict, Verdict::Sat);
  EXPECT_TRUE(std::filesystem::exists(dir / "node4.cnf"));
  std::filesystem::remove_all(dir);
}

TEST(Engine, MatchesOracleOnRandomFormulas) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 400; ++i) {
    Formula f = dt::random_dqbf(rng, {4, 4, 12, 4});
    EngineOptions o;
    o.self_check = true;
    o.seed = static_cast<std::uint64_t>(i % 3);
    EngineResult r = solve_dqbf(f, o);
    ASSERT_NE(r.verdict, Verdict::Unknown) << r.reason << '\n' << serialize_dqdimacs(f);
    ASSERT_EQ(r.verdict == Verdict::Sat, oracle_solve(f)) << serialize_dqdimacs(f);
  }
}

TEST(Engine, MatchesGameTreeOnQbf) {
  std::mt19937_64 rng(32);
  for (int i = 0; i < 300; ++i) {
    Formula f = dt::random_qbf(rng);
    EngineResult r = solve_dqbf(f);
    ASSERT_NE(r.verdict, Verdict::Unknown);
    ASSERT_EQ(r.verdict == Verdict::Sat, game_tree_eval(f)) << serialize_dqdimacs(f);
  }
}
