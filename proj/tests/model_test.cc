// Copyright 2026 The Flowcore Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "flowcore/model.h"

#include <gtest/gtest.h>

#include "flowcore/error.h"
#include "tests/testing/generators.h"

namespace flowcore {
namespace {

using testing::TwoBottleneckInstance;
using testing::FourPathInstance;

Rational Q(const char* s) { return ParseRational(s); }

PayoffVector Pay(std::initializer_list<int> values) {
  PayoffVector p(static_cast<int>(values.size()));
  int v = 1;
  for (int x : values) p[v++] = x;
  return p;
}

Flow AmountsFor(const GameInstance& g,
                std::initializer_list<std::tuple<int, int, const char*>> f) {
  std::vector<Rational> amounts(g.num_commodities(), Rational(0));
  for (const auto& [a, b, x] : f) amounts[*g.FindCommodity(a, b)] = Q(x);
  return Flow::FromAmounts(amounts);
}

ErrorKind KindOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::kSolver;
}

TEST(RationalTest, ParsesAndPrints) {
  EXPECT_EQ(Q("3/6"), Frac(1, 2));
  EXPECT_EQ(Q("0.1"), Frac(1, 10));
  EXPECT_EQ(Q("-2"), Rational(-2));
  EXPECT_EQ(ToString(Frac(4, 2)), "2");
  EXPECT_EQ(ToString(Frac(-3, 4)), "-3/4");
  EXPECT_EQ(ToDecimal(Frac(2, 3), 3), "0.667");
  EXPECT_EQ(ToDecimal(Frac(-1, 2), 0), "-1");
  EXPECT_EQ(KindOf([] { Q("1/0"); }), ErrorKind::kStructural);
  EXPECT_EQ(KindOf([] { Q("abc"); }), ErrorKind::kStructural);
}

TEST(ModelTest, TwoBottleneckFlowsAndPayoffs) {
  const GameInstance g = TwoBottleneckInstance();
  ASSERT_EQ(g.num_commodities(), 5);
  const Flow a = AmountsFor(g, {{1, 2, "1"}, {1, 3, "1"}, {3, 4, "1"}});
  const Flow b = AmountsFor(g, {{1, 2, "1"}, {2, 4, "1"}, {3, 4, "1"}});
  EXPECT_TRUE(IsFeasible(g, a));
  EXPECT_TRUE(IsFeasible(g, b));
  EXPECT_EQ(Payoff(g, a), Pay({2, 1, 2, 1}));
  EXPECT_EQ(Payoff(g, b), Pay({1, 2, 1, 2}));
  EXPECT_EQ(SocialWelfare(Payoff(g, a)), 6);

  const Flow avg = a.Plus(b).Scaled(Frac(1, 2));
  PayoffVector expected(4, Frac(3, 2));
  EXPECT_EQ(Payoff(g, avg), expected);
  EXPECT_TRUE(IsFeasible(g, avg));
}

TEST(ModelTest, FourPathPayoff) {
  const GameInstance g = FourPathInstance();
  const Flow f = AmountsFor(g, {{2, 3, "1"}});
  EXPECT_EQ(Payoff(g, f), Pay({0, 1, 1, 0}));
  EXPECT_EQ(Fairness(Payoff(g, f), g.DemandIncidentNodes()), 0);
}

TEST(ModelTest, FeasibilityReportsFirstViolation) {
  const GameInstance g = TwoBottleneckInstance();
  const Flow over_cap = AmountsFor(g, {{1, 3, "2"}, {2, 4, "1"}});
  FeasibilityReport r = CheckFeasibility(g, over_cap);
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.first_violation->kind, Violation::Kind::kCapacity);
  EXPECT_EQ(r.first_violation->node, 2);

  const Flow over_demand = AmountsFor(g, {{1, 2, "3/2"}});
  r = CheckFeasibility(g, over_demand);
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.first_violation->kind, Violation::Kind::kDemand);

  const Flow negative = AmountsFor(g, {{3, 4, "-1"}});
  r = CheckFeasibility(g, negative);
  ASSERT_FALSE(r.feasible);
  EXPECT_EQ(r.first_violation->kind, Violation::Kind::kNegative);
}

TEST(ModelTest, RejectsMalformedInstances) {
  const Capacity one(Rational(1));
  EXPECT_EQ(KindOf([&] { GameInstance::MakePath({one, one}, {{1, 1, 1}}); }),
            ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] { GameInstance::MakePath({one, one}, {{1, 3, 1}}); }),
            ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] {
              GameInstance::MakePath({one, one}, {{1, 2, 1}, {2, 1, 1}});
            }),
            ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] { GameInstance::MakePath({one, one}, {{1, 2, -1}}); }),
            ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] {
              GameInstance::MakePath({Capacity(Rational(-1)), one}, {});
            }),
            ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] {
              GameInstance::Create(3, Topology::General(), {{1, 2}}, {one, one, one},
                                   {});
            }),
            ErrorKind::kStructural);
  // Node 2 has degree three but the declared root is 1.
  EXPECT_EQ(KindOf([&] {
              GameInstance::Create(4, Topology::Spider(1), {{1, 2}, {2, 3}, {2, 4}},
                                   {one, one, one, one}, {});
            }),
            ErrorKind::kStructural);
}

TEST(ModelTest, SpiderPathsAndLegs) {
  const Capacity one(Rational(1));
  // Root 3 with legs 3-1, 3-2-5, 3-4.
  const GameInstance g = GameInstance::Create(
      5, Topology::Spider(3), {{1, 3}, {2, 3}, {2, 5}, {3, 4}},
      {one, one, one, one, one}, {{1, 5, 1}, {4, 2, 1}});
  EXPECT_EQ(g.num_legs(), 3);
  EXPECT_EQ(g.LegOf(3), 0);
  EXPECT_EQ(g.LegOf(2), g.LegOf(5));
  EXPECT_NE(g.LegOf(1), g.LegOf(4));
  EXPECT_EQ(g.CommodityPath(*g.FindCommodity(1, 5)),
            (std::vector<NodeId>{1, 3, 2, 5}));
  EXPECT_EQ(g.CommodityPath(*g.FindCommodity(2, 4)),
            (std::vector<NodeId>{2, 3, 4}));
  EXPECT_EQ(g.TreeDistance(5, 4), 3);
}

TEST(ModelTest, InducedSubgameOnPath) {
  const GameInstance g = TwoBottleneckInstance();
  const Subgame sub = InducedSubgame(g, {3, 2});
  EXPECT_TRUE(sub.instance.is_path());
  EXPECT_EQ(sub.instance.num_nodes(), 2);
  EXPECT_EQ(sub.original_node, (std::vector<NodeId>{2, 3}));
  ASSERT_EQ(sub.instance.num_commodities(), 1);
  EXPECT_EQ(sub.instance.commodity(0).demand, 2);
  EXPECT_EQ(sub.original_commodity[0], *g.FindCommodity(2, 3));
  EXPECT_EQ(KindOf([&] { InducedSubgame(g, {1, 3}); }), ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] { InducedSubgame(g, {}); }), ErrorKind::kStructural);
}

TEST(ModelTest, InducedSubgameReclassifiesShape) {
  const Capacity one(Rational(1));
  const GameInstance g = GameInstance::Create(
      5, Topology::Spider(3), {{1, 3}, {2, 3}, {2, 5}, {3, 4}},
      {one, Capacity(Rational(2)), one, one, Capacity(Rational(5))},
      {{1, 5, 1}, {4, 2, 1}, {5, 3, 2}});
  // Leg 5-2-3-1 is path shaped, renumbered from an end.
  const Subgame leg = InducedSubgame(g, {1, 2, 3, 5});
  EXPECT_TRUE(leg.instance.is_path());
  EXPECT_EQ(leg.original_node, (std::vector<NodeId>{1, 3, 2, 5}));
  EXPECT_EQ(leg.instance.capacity(4), Capacity(Rational(5)));
  EXPECT_EQ(leg.instance.num_commodities(), 2);
  const Subgame whole = InducedSubgame(g, {1, 2, 3, 4, 5});
  EXPECT_TRUE(whole.instance.is_spider());
  EXPECT_EQ(whole.original_node[whole.instance.topology().root - 1], 3);
}

TEST(ModelTest, PathModeFlowsOnGeneralGraph) {
  const Capacity two(Rational(2));
  const GameInstance g = GameInstance::Create(
      4, Topology::General(), {{1, 2}, {2, 4}, {1, 3}, {3, 4}},
      {Capacity(Rational(3)), two, two, Capacity(Rational(3))}, {{1, 4, 3}});
  const Flow f = Flow::FromPaths(
      1, {{0, {1, 2, 4}, Frac(3, 2)}, {0, {1, 3, 4}, Frac(3, 2)}});
  EXPECT_EQ(f.amount(0), 3);
  EXPECT_TRUE(IsFeasible(g, f));
  EXPECT_EQ(Payoff(g, f)[4], 3);
  const Flow bad = Flow::FromPaths(1, {{0, {1, 4}, Rational(1)}});
  EXPECT_EQ(KindOf([&] { bad.Validate(g); }), ErrorKind::kStructural);
  EXPECT_EQ(KindOf([&] { Flow::FromAmounts({Rational(1)}).Validate(g); }),
            ErrorKind::kStructural);
}

TEST(ModelTest, ResidualBottleneck) {
  const GameInstance g = TwoBottleneckInstance();
  ResidualState r(g);
  NodeId arg = 0;
  EXPECT_TRUE(r.Bottleneck({1}).unbounded());
  EXPECT_EQ(r.Bottleneck({1, 2, 3}, &arg), Capacity(Rational(2)));
  EXPECT_EQ(arg, 2);
  r.Consume({2, 3, 4}, Frac(1, 2));
  EXPECT_EQ(r[3], Capacity(Frac(3, 2)));
  EXPECT_TRUE(r[4].unbounded());
}

TEST(ModelProperty, PayoffSumsToTwiceTotalFlow) {
  testing::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const GameInstance g = testing::RandomSpider(rng, {.max_nodes = 8});
    const Flow f = testing::RandomFeasibleFlow(rng, g);
    ASSERT_TRUE(IsFeasible(g, f));
    Rational total = 0;
    for (const Rational& x : f.totals()) total += x;
    EXPECT_EQ(SocialWelfare(Payoff(g, f)), 2 * total);
  }
}

}  // namespace
}  // namespace flowcore
