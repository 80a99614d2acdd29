// SPDX-License-Identifier: MIT
#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "dqbf/lattice.hpp"
#include "support.hpp"

using namespace dqbf;
namespace dt = dqbf::testing;

namespace {

bool has_property(const std::vector<Violation>& vs, const std::string& p) {
  return std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.property == p; });
}

Node exist_node(int id, VarSet vars, DependencySet dep) {
  Node n;
  n.id = id;
  n.kind = NodeKind::Existential;
  n.vars = std::move(vars);
  n.dep = std::move(dep);
  return n;
}

Node forall_node(int id, VarSet vars) {
  Node n;
  n.id = id;
  n.kind = NodeKind::Universal;
  n.vars = std::move(vars);
  return n;
}

}  // namespace

TEST(Closure, AddsIntersections) {
  auto l = close_under_intersection({{1, 2}, {2, 3}});
  EXPECT_EQ(l, (std::vector<DependencySet>{{1, 2}, {2}, {2, 3}}));
  auto m = close_under_intersection({{1}, {2}, {1, 3}});
  EXPECT_EQ(m, (std::vector<DependencySet>{{}, {1}, {1, 3}, {2}}));
}

TEST(Structure, LatticeContainsEmptySetAndTop) {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  p.add_existential(4, {2});
  SolverStructure s = SolverStructure::build(p);
  EXPECT_EQ(s.lattice(), (std::vector<DependencySet>{{}, {1}, {1, 2}, {2}}));
  EXPECT_EQ(s.node(s.maximal_node()).dep, (DependencySet{1, 2}));
  EXPECT_TRUE(s.node(s.maximal_node()).vars.empty());
}

TEST(Structure, TraceExampleLevels) {
  Formula f = dt::load(DQBF_TEST_DATA "/trace_example.dqdimacs");
  SolverStructure s = SolverStructure::build(f.prefix());
  ASSERT_EQ(s.levels().size(), 4u);
  EXPECT_EQ(s.levels()[0].nodes, std::vector<int>{0});
  EXPECT_EQ(s.node(0).dep, DependencySet{});
  EXPECT_EQ(s.levels()[1].kind, NodeKind::Universal);
  EXPECT_EQ(s.node(1).vars, (VarSet{1, 2}));
  EXPECT_EQ(s.levels()[2].nodes, (std::vector<int>{2, 3}));
  EXPECT_EQ(s.node(2).vars, VarSet{3});
  EXPECT_EQ(s.node(3).vars, VarSet{4});
  EXPECT_EQ(s.maximal_node(), 4);
  EXPECT_EQ(s.node(4).vars, VarSet{5});
  EXPECT_EQ(s.bound_forall(4), (VarSet{1, 2}));
  EXPECT_EQ(s.bound_exists(4), (VarSet{3, 4}));
  EXPECT_EQ(s.bound_exists(2), VarSet{});
  EXPECT_EQ(s.node_of_var(4), 3);
  EXPECT_EQ(s.node_of_var(9), -1);
  EXPECT_TRUE(validate(s, f.prefix()).empty());
}

TEST(Structure, QbfAlternation) {
  Prefix p;
  p.add_universal(1);
  p.add_existential(2, {1});
  p.add_universal(3);
  p.add_existential(4, {1, 3});
  SolverStructure s = SolverStructure::build(p);
  ASSERT_EQ(s.levels().size(), 5u);
  EXPECT_EQ(s.node(s.levels()[1].nodes[0]).vars, VarSet{1});
  EXPECT_EQ(s.node(s.levels()[2].nodes[0]).vars, VarSet{2});
  EXPECT_EQ(s.node(s.levels()[3].nodes[0]).vars, VarSet{3});
  EXPECT_EQ(s.node(s.levels()[4].nodes[0]).vars, VarSet{4});
  EXPECT_TRUE(validate(s, p).empty());
}

TEST(Structure, UnusedUniversalsJoinLastUniversalLevel) {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  SolverStructure s = SolverStructure::build(p);
  ASSERT_EQ(s.levels().size(), 3u);
  EXPECT_EQ(s.node(1).vars, (VarSet{1, 2}));
  EXPECT_TRUE(validate(s, p).empty());

  Prefix q;
  q.add_universal(1);
  q.add_existential(2, {});
  SolverStructure t = SolverStructure::build(q);
  ASSERT_EQ(t.levels().size(), 2u);
  EXPECT_EQ(t.levels()[1].kind, NodeKind::Universal);
  EXPECT_EQ(t.maximal_node(), 0);
  EXPECT_TRUE(validate(t, q).empty());
}

TEST(Structure, NodeForDep) {
  Formula f = dt::load(DQBF_TEST_DATA "/trace_example.dqdimacs");
  SolverStructure s = SolverStructure::build(f.prefix());
  bool rebuilt = true;
  f.prefix().add_existential(6, {});
  EXPECT_EQ(s.node_for_dep(f.prefix(), {}, &rebuilt), 0);
  EXPECT_FALSE(rebuilt);
  EXPECT_EQ(s.node(0).vars, VarSet{6});
  EXPECT_EQ(s.bound_exists(2), VarSet{6});

  f.prefix().add_universal(7);
  f.prefix().add_existential(8, {7});
  int id = s.node_for_dep(f.prefix(), {7}, &rebuilt);
  EXPECT_TRUE(rebuilt);
  EXPECT_EQ(s.node(id).dep, DependencySet{7});
  EXPECT_TRUE(validate(s, f.prefix()).empty());
}

TEST(Validate, DetectsViolations) {
  Prefix p;
  p.add_universal(1);
  p.add_universal(2);
  p.add_existential(3, {1});
  p.add_existential(4, {1, 2});

  // Comparable dependency sets on one level.
  SolverStructure a = SolverStructure::from_levels(
      {{NodeKind::Existential, {0}}, {NodeKind::Universal, {1}}, {NodeKind::Existential, {2, 3}}},
      {exist_node(0, {}, {}), forall_node(1, {1, 2}), exist_node(2, {3}, {1}), exist_node(3, {4}, {1, 2})});
  EXPECT_TRUE(has_property(validate(a, p), "level-antichain"));

  // Larger dependency set placed first.
  SolverStructure b = SolverStructure::from_levels({{NodeKind::Existential, {0}},
                                                    {NodeKind::Universal, {1}},
                                                    {NodeKind::Existential, {2}},
                                                    {NodeKind::Existential, {3}}},
                                                   {exist_node(0, {}, {}), forall_node(1, {1, 2}),
                                                    exist_node(2, {4}, {1, 2}), exist_node(3, {3}, {1})});
  EXPECT_TRUE(has_property(validate(b, p), "level-order"));

  // Existential before its universals, and a variable left out.
  SolverStructure c = SolverStructure::from_levels(
      {{NodeKind::Existential, {0}}, {NodeKind::Existential, {1}}, {NodeKind::Universal, {2}}},
      {exist_node(0, {}, {}), exist_node(1, {4}, {1, 2}), forall_node(2, {1, 2})});
  auto vc = validate(c, p);
  EXPECT_TRUE(has_property(vc, "deps-bound"));
  EXPECT_TRUE(has_property(vc, "single-binding"));

  // Two incomparable tops.
  Prefix q;
  q.add_universal(1);
  q.add_universal(2);
  q.add_existential(3, {1});
  q.add_existential(4, {2});
  SolverStructure d = SolverStructure::from_levels(
      {{NodeKind::Existential, {0}}, {NodeKind::Universal, {1}}, {NodeKind::Existential, {2, 3}}},
      {exist_node(0, {}, {}), forall_node(1, {1, 2}), exist_node(2, {3}, {1}), exist_node(3, {4}, {2})});
  EXPECT_TRUE(has_property(validate(d, q), "unique-maximum"));
}

TEST(Validate, RandomPrefixes) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 1000; ++i) {
    Prefix p = dt::random_prefix(rng, dt::uniform(rng, 0, 6), dt::uniform(rng, 0, 8));
    SolverStructure s = SolverStructure::build(p);
    auto vs = validate(s, p);
    ASSERT_TRUE(vs.empty()) << vs.front().property << ": " << vs.front().detail;
    EXPECT_EQ(s.node(0).dep, DependencySet{});
  }
}
