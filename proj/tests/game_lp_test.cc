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

#include "flowcore/game_lp.h"

#include <gtest/gtest.h>

#include "flowcore/error.h"
#include "flowcore/incorporate.h"
#include "tests/testing/generators.h"
#include "tests/testing/lp_oracle.h"

namespace flowcore {
namespace {

using testing::TwoBottleneckInstance;
using testing::FourPathInstance;

Capacity Cap(int c) { return Capacity(Rational(c)); }

PayoffVector Uniform(int n, const Rational& x) { return PayoffVector(n, x); }

PayoffVector Pay(std::initializer_list<int> values) {
  PayoffVector p(static_cast<int>(values.size()));
  int v = 1;
  for (int x : values) p[v++] = x;
  return p;
}

TEST(DeviationTest, TwoBottleneckAverageHasBreakaway) {
  const GameInstance g = TwoBottleneckInstance();
  const DeviationResult r = DeviationMargin(g, Uniform(4, Frac(3, 2)), {2, 3});
  EXPECT_EQ(r.margin, Frac(1, 2));
  EXPECT_EQ(r.witness.amount(*g.FindCommodity(2, 3)), 2);
  const PayoffVector pay = Payoff(g, r.witness);
  EXPECT_EQ(pay[2], 2);
  EXPECT_EQ(pay[3], 2);
  EXPECT_TRUE(IsFeasible(g, r.witness));
}

TEST(DeviationTest, TwoBottleneckCoreVectorsHaveNoPositiveMargin) {
  const GameInstance g = TwoBottleneckInstance();
  for (const PayoffVector& target : {Pay({2, 1, 2, 1}), Pay({1, 2, 1, 2})}) {
    for (int i = 1; i <= 4; ++i) {
      for (int j = i; j <= 4; ++j) {
        if (i == 1 && j == 4) continue;
        std::vector<NodeId> s;
        for (int v = i; v <= j; ++v) s.push_back(v);
        EXPECT_LE(DeviationMargin(g, target, s).margin, 0) << i << ".." << j;
      }
    }
  }
}

TEST(DeviationTest, ZeroPayoffWithSpareCapacity) {
  const GameInstance g = GameInstance::MakePath({Cap(1), Cap(1), Cap(1)},
                                                {{1, 2, 1}});
  EXPECT_GT(DeviationMargin(g, Uniform(3, 0), {1, 2}).margin, 0);
}

TEST(DeviationTest, DualIsNormalizedAndSatisfiesPathRows) {
  const GameInstance g = TwoBottleneckInstance();
  const DeviationResult r = DeviationMargin(g, Pay({2, 1, 2, 1}), {1, 2, 3});
  Rational wsum = 0;
  for (NodeId v = 1; v <= 4; ++v) {
    EXPECT_GE(r.w[v], 0);
    EXPECT_GE(r.y[v], 0);
    wsum += r.w[v];
  }
  EXPECT_EQ(wsum, 1);
  // Dual objective equals the margin.
  Rational dual = 0;
  for (NodeId v = 1; v <= 3; ++v) {
    if (!g.capacity(v).unbounded()) dual += r.y[v] * g.capacity(v).value();
    dual -= r.w[v] * Pay({2, 1, 2, 1})[v];
  }
  for (const auto& [k, z] : r.z) dual += z * g.commodity(k).demand;
  EXPECT_EQ(dual, r.margin);
}

TEST(DeviationTest, RejectsImproperCoalitions) {
  const GameInstance g = TwoBottleneckInstance();
  EXPECT_THROW(DeviationMargin(g, Uniform(4, 0), {}), Error);
  EXPECT_THROW(DeviationMargin(g, Uniform(4, 0), {1, 2, 3, 4}), Error);
}

TEST(DeviationTest, DisconnectedCoalitionRoutesOnlyInsideComponents) {
  const GameInstance g = TwoBottleneckInstance();
  // {1, 3}: commodity 13 needs node 2, so nothing can be routed.
  EXPECT_EQ(DeviationMargin(g, Uniform(4, 0), {1, 3}).margin, 0);
}

TEST(DeviationProperty, AntitoneInTarget) {
  testing::Rng rng(17);
  for (int trial = 0; trial < 150; ++trial) {
    const GameInstance g = testing::RandomPath(rng, {.min_nodes = 3, .max_nodes = 6});
    const Flow f = testing::RandomFeasibleFlow(rng, g);
    PayoffVector low = Payoff(g, f);
    PayoffVector high = low;
    for (NodeId v = 1; v <= g.num_nodes(); ++v) {
      high[v] += testing::RandomRational(rng, 0, 1, 3);
    }
    const int i = std::uniform_int_distribution<int>(1, g.num_nodes() - 1)(rng);
    const int j = std::uniform_int_distribution<int>(i, g.num_nodes() - 1)(rng);
    std::vector<NodeId> s;
    for (int v = i; v <= j; ++v) s.push_back(v);
    EXPECT_GE(DeviationMargin(g, low, s).margin, DeviationMargin(g, high, s).margin);
  }
}

TEST(WelfareTest, Examples) {
  EXPECT_EQ(SocialWelfareLp(FourPathInstance()).social_welfare, 2);
  const GameInstance zero =
      GameInstance::MakePath({Cap(1), Cap(1)}, {{1, 2, 0}});
  EXPECT_EQ(SocialWelfareLp(zero).social_welfare, 0);
  // Nodes 2 and 3 each admit two units; 12 and 34 use one of them each, so
  // the total flow is at most 2 + f34 <= 3.
  const WelfareResult fig1 = SocialWelfareLp(TwoBottleneckInstance());
  EXPECT_EQ(fig1.total_flow, 3);
  EXPECT_EQ(fig1.social_welfare, 6);
  EXPECT_TRUE(IsFeasible(TwoBottleneckInstance(), fig1.witness));
}

TEST(WelfareTest, TwoBottleneckAgreesWithVertexEnumeration) {
  // The same LP written out by hand: f12, f13, f23, f24, f34.
  LinearProgram lp;
  for (int d : {1, 2, 2, 2, 1}) lp.AddVariable(1, 0, Rational(d));
  lp.AddConstraint({{0, 1}, {1, 1}, {2, 1}, {3, 1}}, Relation::kLessEqual, 2);
  lp.AddConstraint({{1, 1}, {2, 1}, {3, 1}, {4, 1}}, Relation::kLessEqual, 2);
  const testing::OracleResult oracle = testing::SolveByVertexEnumeration(lp);
  EXPECT_EQ(2 * oracle.value, SocialWelfareLp(TwoBottleneckInstance()).social_welfare);
}

TEST(FairnessTest, Examples) {
  const FairnessResult p4 = FairnessLp(FourPathInstance());
  EXPECT_EQ(p4.tau, Frac(1, 2));
  EXPECT_EQ(p4.eligible, (std::vector<NodeId>{1, 2, 3, 4}));
  EXPECT_TRUE(IsFeasible(FourPathInstance(), p4.witness));
  const GameInstance zero = GameInstance::MakePath({Cap(1), Cap(1)}, {{1, 2, 0}});
  EXPECT_EQ(FairnessLp(zero, std::vector<NodeId>{1, 2}).tau, 0);
  EXPECT_THROW(FairnessLp(zero), Error);  // no demand-incident nodes
  // pi_1 + pi_4 <= total flow <= 3, and the average of the two core flows
  // pays everyone 3/2.
  EXPECT_EQ(FairnessLp(TwoBottleneckInstance()).tau, Frac(3, 2));
}

TEST(FairnessTest, FeasibilityAtThreshold) {
  const GameInstance g = FourPathInstance();
  EXPECT_TRUE(FairnessFeasible(g, {1, 2, 3, 4}, Frac(1, 2)));
  EXPECT_FALSE(FairnessFeasible(g, {1, 2, 3, 4}, Frac(1, 2) + Frac(1, 1000)));
}

TEST(LpProperty, WelfareAndFairnessBounds) {
  testing::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const GameInstance g = testing::RandomPath(rng, {.min_nodes = 2, .max_nodes = 6});
    if (g.DemandIncidentNodes().empty()) continue;
    const Rational sw = SocialWelfareLp(g).social_welfare;
    const Flow f = Incorporate(g, RandomValidOrder(g, trial)).flow;
    EXPECT_GE(sw, SocialWelfare(Payoff(g, f)));
    const FairnessResult fair = FairnessLp(g);
    for (NodeId v : fair.eligible) {
      Rational incident = 0;
      for (int k : g.incident_commodities(v)) incident += g.commodity(k).demand;
      EXPECT_LE(fair.tau, incident);
      if (!g.capacity(v).unbounded()) EXPECT_LE(fair.tau, g.capacity(v).value());
    }
  }
}

TEST(RoutingPathsTest, GeneralGraphEnumeratesSimplePaths) {
  const GameInstance g = GameInstance::Create(
      4, Topology::General(), {{1, 2}, {2, 3}, {3, 4}, {1, 4}},
      {Cap(2), Cap(1), Cap(2), Cap(1)}, {{1, 3, 2}});
  std::vector<char> all(5, 1);
  EXPECT_EQ(RoutingPaths(g, all)[0].size(), 2u);
  std::vector<char> no4 = all;
  no4[4] = 0;
  EXPECT_EQ(RoutingPaths(g, no4)[0].size(), 1u);
  // Both unit paths saturate their middle node: two units total.
  EXPECT_EQ(SocialWelfareLp(g).total_flow, 2);
  const DeviationResult r = DeviationMargin(g, PayoffVector(4, Rational(0)), {1, 2, 3});
  EXPECT_EQ(r.margin, 0);  // node 2 gets nothing from commodity 13
}

}  // namespace
}  // namespace flowcore
