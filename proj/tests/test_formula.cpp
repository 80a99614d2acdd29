// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include "dqbf/formula.hpp"
#include "dqbf/oracle.hpp"

using namespace dqbf;

namespace {

Lit L(int v) { return Lit::from_int(v); }

// x1=1, x2=2, y1=3, y2=4, y3=5
Prefix trace_prefix() {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  p.add_existential(4, {2});
  p.add_existential(5, {1, 2});
  return p;
}

}  // namespace

TEST(VarSet, SortedAndDeduplicated) {
  VarSet s{3, 1, 3, 2};
  EXPECT_EQ(s.vars(), (std::vector<Var>{1, 2, 3}));
  EXPECT_EQ(s.str(), "{1,2,3}");
  s.erase(2);
  s.insert(5);
  EXPECT_EQ(s.vars(), (std::vector<Var>{1, 3, 5}));
}

TEST(VarSet, SetAlgebra) {
  VarSet a{1, 2}, b{2, 3};
  EXPECT_EQ(a.unite(b), (VarSet{1, 2, 3}));
  EXPECT_EQ(a.intersect(b), (VarSet{2}));
  EXPECT_EQ(a.minus(b), (VarSet{1}));
  EXPECT_FALSE(a.comparable(b));
  EXPECT_TRUE(VarSet{2}.strict_subset_of(a));
  EXPECT_FALSE(a.strict_subset_of(a));
  EXPECT_TRUE(VarSet{}.subset_of(a));
}

TEST(Clause, NormalizesLiterals) {
  Clause c = Clause::from_ints({3, -1, 3});
  EXPECT_EQ(c.str(), "(-1 3)");
  EXPECT_FALSE(c.is_tautology());
  EXPECT_TRUE(Clause::from_ints({1, -1}).is_tautology());
  EXPECT_EQ(c.vars(), (VarSet{1, 3}));
}

TEST(Prefix, RejectsDoubleQuantification) {
  Prefix p;
  p.add_universal(1);
  EXPECT_THROW(p.add_universal(1), FormulaError);
  EXPECT_THROW(p.add_existential(1, {}), FormulaError);
  EXPECT_THROW(p.add_existential(2, {7}), FormulaError);
  p.add_existential(2, {1});
  EXPECT_THROW(p.add_existential(3, {2}), FormulaError);
  EXPECT_THROW(p.deps(1), FormulaError);
}

TEST(Dep, Literals) {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  EXPECT_EQ(dep(L(-3), p), (DependencySet{1}));
  EXPECT_EQ(dep(L(2), p), (DependencySet{2}));
  EXPECT_EQ(dep(L(5), trace_prefix()), (DependencySet{1, 2}));
  EXPECT_THROW(dep(L(9), p), FormulaError);
}

TEST(Dep, Clauses) {
  Prefix p = trace_prefix();
  EXPECT_EQ(dep_clause(Clause::from_ints({-1, 3}), p), (DependencySet{1}));
  EXPECT_EQ(dep_clause(Clause{}, p), DependencySet{});
  EXPECT_EQ(dep_clause(Clause::from_ints({3, 4}), p), (DependencySet{1, 2}));
}

TEST(Exdep, TraceExample) {
  Prefix p = trace_prefix();
  EXPECT_EQ(exdep({5}, p), (VarSet{1, 2, 3, 4}));
  EXPECT_EQ(exdep({3}, p), (VarSet{1}));
  Prefix q;
  q.add_universal(1);
  q.add_existential(2, {});
  EXPECT_EQ(exdep({2}, q), VarSet{});
}

TEST(RestrictClause, Filters) {
  Clause c = Clause::from_ints({-1, 4, 5});
  EXPECT_EQ(restrict_clause(c, {1, 4}), Clause::from_ints({-1, 4}));
  EXPECT_TRUE(restrict_clause(c, {}).empty());
  EXPECT_EQ(restrict_clause(c, c.vars()), c);
}

TEST(UniversalReduce, Examples) {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  EXPECT_EQ(universal_reduce(Clause::from_ints({2, 3}), p), Clause::from_ints({3}));
  EXPECT_EQ(universal_reduce(Clause::from_ints({1, 3}), p), Clause::from_ints({1, 3}));
  EXPECT_TRUE(universal_reduce(Clause::from_ints({1, 2}), p).empty());
}

TEST(UniversalReduce, PurelyUniversalClauseMakesFormulaFalse) {
  Formula f;
  f.prefix().add_universal(1);
  f.prefix().add_universal(2);
  f.add_clause(Clause::from_ints({1, 2}));
  EXPECT_FALSE(oracle_solve(f));
}

TEST(EvalClause, ThreeValued) {
  Clause c = Clause::from_ints({1, 3});
  Assignment a;
  a.set(1, true);
  a.set(3, false);
  EXPECT_EQ(eval_clause(c, a), Truth::True);
  a.set(1, false);
  EXPECT_EQ(eval_clause(c, a), Truth::False);
  a.unset(3);
  EXPECT_EQ(eval_clause(c, a), Truth::Undef);
}

TEST(Assignment, UpdateAndOrder) {
  Assignment a, b;
  a.set(1, true);
  b.set(1, false);
  b.set(2, true);
  EXPECT_FALSE(a.below(b));
  Assignment c = a.updated(b);
  EXPECT_EQ(c, b);
  EXPECT_TRUE(a.restricted({1}).below(a));
  EXPECT_EQ(c.domain(), (std::vector<Var>{1, 2}));
  EXPECT_TRUE(Assignment{}.empty());
}

TEST(Formula, ClauseIdsAreStable) {
  Formula f;
  f.prefix().add_universal(1);
  f.prefix().add_existential(2, {1});
  ClauseId a = f.add_clause(Clause::from_ints({1, 2}));
  ClauseId b = f.add_clause(Clause::from_ints({-2}));
  f.deactivate(a);
  EXPECT_EQ(f.active_ids(), std::vector<ClauseId>{b});
  EXPECT_EQ(f.num_clauses(), 2u);
  EXPECT_EQ(f.num_active(), 1u);
  EXPECT_EQ(f.max_var(), 2u);
  EXPECT_EQ(f.fresh_var(), 3u);
}
