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

#include "flowcore/singlesink.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "flowcore/error.h"
#include "flowcore/game_lp.h"
#include "flowcore/verify.h"
#include "tests/testing/generators.h"

namespace flowcore {
namespace {

using testing::Rng;

Capacity Cap(int c) { return Capacity(Rational(c)); }

std::vector<Rational> Demands(const SingleSinkInstance& ssi) {
  std::vector<Rational> d;
  for (const Terminal& t : ssi.terminals()) d.push_back(t.demand);
  return d;
}

// The same network with the caps as demands.
SingleSinkInstance Capped(const SingleSinkInstance& ssi,
                          const std::vector<Rational>& caps) {
  std::vector<Terminal> terminals = ssi.terminals();
  for (size_t i = 0; i < caps.size(); ++i) terminals[i].demand = caps[i];
  const GameInstance& g = ssi.base();
  std::vector<Capacity> capacity(g.capacities().begin(), g.capacities().end());
  return SingleSinkInstance::Create(g.num_nodes(), g.topology(), g.edges(), capacity,
                                    ssi.sink(), terminals);
}

SingleSinkInstance Star(int terminals, int sink_capacity) {
  std::vector<Edge> edges;
  std::vector<Terminal> ts;
  for (NodeId s = 2; s <= terminals + 1; ++s) {
    edges.push_back({1, s});
    ts.push_back({s, Rational(1)});
  }
  std::vector<Capacity> caps(terminals + 1, Capacity::Unbounded());
  caps[0] = Cap(sink_capacity);
  return SingleSinkInstance::Create(terminals + 1, Topology::Spider(1), edges, caps,
                                    1, ts);
}

TEST(SingleSinkInstanceTest, RejectsCommodityAwayFromSink) {
  const GameInstance g = GameInstance::MakePath({Cap(1), Cap(1), Cap(1)},
                                                {{1, 2, 1}, {2, 3, 1}});
  EXPECT_THROW(SingleSinkInstance::FromGame(g, 1), Error);
  const SingleSinkInstance ssi = SingleSinkInstance::FromGame(g, 2);
  EXPECT_EQ(ssi.num_terminals(), 2);
  EXPECT_EQ(ssi.TerminalNodes(), std::vector<NodeId>({1, 3}));
}

TEST(MaxFlowTest, SingleEdgeUnbounded) {
  const SingleSinkInstance ssi = SingleSinkInstance::Create(
      2, Topology::Path(), {}, {Capacity::Unbounded(), Capacity::Unbounded()}, 2,
      {{1, Rational(5)}});
  const MaxFlowResult r = MaxFlowNodeCap(ssi, {Rational(3)});
  EXPECT_EQ(r.value, 3);
  EXPECT_EQ(r.cut_terminals, std::vector<int>({0}));
  EXPECT_TRUE(IsFeasible(ssi.base(), r.flow));
}

TEST(MaxFlowTest, BottleneckNode) {
  const SingleSinkInstance ssi = SingleSinkInstance::Create(
      4, Topology::Path(), {},
      {Capacity::Unbounded(), Capacity::Unbounded(), Cap(1), Capacity::Unbounded()},
      4, {{1, Rational(2)}, {2, Rational(2)}});
  const MaxFlowResult r = MaxFlowNodeCap(ssi, Demands(ssi));
  EXPECT_EQ(r.value, 1);
  EXPECT_EQ(r.cut_nodes, std::vector<NodeId>({3}));
}

TEST(MaxFlowTest, MatchesPathLp) {
  Rng rng(40);
  testing::RandomInstanceOptions options;
  options.max_nodes = 8;
  options.unbounded_prob = 0.2;
  for (int trial = 0; trial < 150; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, options);
    std::vector<Rational> caps;
    for (const Terminal& t : ssi.terminals()) {
      caps.push_back(testing::RandomRational(rng, 0, 3, 2));
    }
    const MaxFlowResult r = MaxFlowNodeCap(ssi, caps);
    const SingleSinkInstance capped = Capped(ssi, caps);
    EXPECT_EQ(r.value, SocialWelfareLp(capped.base()).total_flow) << "trial " << trial;
    EXPECT_TRUE(IsFeasible(capped.base(), r.flow));
    Rational cut = 0;
    for (NodeId v : r.cut_nodes) cut += ssi.base().capacity(v).value();
    for (int i : r.cut_terminals) cut += caps[i];
    EXPECT_EQ(cut, r.value);
    for (int i = 0; i < ssi.num_terminals(); ++i) {
      EXPECT_EQ(r.flow.amount(ssi.commodity_of(i)), r.x[i]);
    }
  }
}

TEST(PolymatroidGreedyTest, ZeroCaps) {
  const SingleSinkInstance ssi = Star(3, 2);
  const MaxFlowResult r = PolymatroidGreedy(ssi, {0, 1, 2}, std::vector<Rational>(3));
  EXPECT_EQ(r.value, 0);
  EXPECT_EQ(r.x, std::vector<Rational>(3, Rational(0)));
}

TEST(PolymatroidGreedyTest, FirstTerminalGetsItsMaximum) {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, {});
    const int k = ssi.num_terminals();
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const std::vector<Rational> d = Demands(ssi);
    const MaxFlowResult r = PolymatroidGreedy(ssi, order, d);
    std::vector<Rational> only(k, Rational(0));
    only[order[0]] = d[order[0]];
    EXPECT_EQ(r.x[order[0]], MaxFlowNodeCap(ssi, only).value);
    EXPECT_EQ(r.value, MaxFlowNodeCap(ssi, d).value);
    EXPECT_TRUE(IsFeasible(ssi.base(), r.flow));
  }
}

TEST(PolymatroidGreedyTest, OrderIndependentTotalAndMonotone) {
  Rng rng(42);
  for (int trial = 0; trial < 80; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, {});
    const int k = ssi.num_terminals();
    std::vector<Rational> caps;
    for (const Terminal& t : ssi.terminals()) {
      caps.push_back(std::min(t.demand, testing::RandomRational(rng, 0, 2, 3)));
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> other = order;
    std::shuffle(other.begin(), other.end(), rng);
    EXPECT_EQ(PolymatroidGreedy(ssi, order, caps).value,
              PolymatroidGreedy(ssi, other, caps).value);
    std::vector<Rational> previous(k, Rational(0));
    for (int j = 1; j <= k; ++j) {
      const std::vector<int> prefix(order.begin(), order.begin() + j);
      const MaxFlowResult r = PolymatroidGreedy(ssi, prefix, caps);
      for (int i = 0; i < k; ++i) EXPECT_GE(r.x[i], previous[i]);
      previous = r.x;
    }
  }
}

TEST(FairCoreFlowTest, SingleTerminal) {
  const SingleSinkInstance ssi = SingleSinkInstance::Create(
      3, Topology::Path(), {}, {Cap(5), Cap(2), Cap(5)}, 3, {{1, Rational(3)}});
  const FairCoreFlowResult r = FairCoreFlow(ssi);
  EXPECT_EQ(r.tau, 2);
  EXPECT_EQ(r.x, std::vector<Rational>({Rational(2)}));
  EXPECT_TRUE(r.lp_checked);
}

TEST(FairCoreFlowTest, SymmetricStar) {
  const FairCoreFlowResult r = FairCoreFlow(Star(2, 1));
  EXPECT_EQ(r.tau, Frac(1, 2));
  EXPECT_EQ(r.x, std::vector<Rational>({Frac(1, 2), Frac(1, 2)}));
}

TEST(FairCoreFlowTest, MatchesWelfareAndFairnessLps) {
  Rng rng(43);
  testing::RandomInstanceOptions options;
  options.max_nodes = 8;
  options.unbounded_prob = 0.2;
  for (int trial = 0; trial < 120; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, options);
    const FairCoreFlowResult r = FairCoreFlow(ssi);
    ASSERT_TRUE(r.lp_checked);
    EXPECT_TRUE(IsFeasible(ssi.base(), r.flow));
    const Rational total = std::accumulate(r.x.begin(), r.x.end(), Rational(0));
    EXPECT_EQ(total, SocialWelfareLp(ssi.base()).total_flow) << "trial " << trial;
    EXPECT_EQ(*std::min_element(r.x.begin(), r.x.end()),
              FairnessLp(ssi.base(), ssi.TerminalNodes()).tau);
    for (int i = 0; i < ssi.num_terminals(); ++i) {
      EXPECT_GE(r.x[i], r.phase_one[i]);
    }
    EXPECT_FALSE(FairnessFeasible(ssi.base(), ssi.TerminalNodes(),
                                  r.tau + Frac(1, 1000)));
    EXPECT_TRUE(CoreCheckSingleSink(ssi, r.flow));
  }
}

TEST(FairCoreFlowTest, RejectsEmptyTerminalSet) {
  const GameInstance g = GameInstance::MakePath({Cap(1), Cap(1)}, {});
  EXPECT_THROW(FairCoreFlow(SingleSinkInstance::FromGame(g, 1)), Error);
}

TEST(CoreCheckTest, ZeroFlowFails) {
  const SingleSinkInstance ssi = Star(2, 1);
  EXPECT_FALSE(CoreCheckSingleSink(ssi, Flow::Zero(ssi.base())));
}

TEST(CoreCheckTest, SufficientForVerifyCore) {
  Rng rng(44);
  int maximal = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, {});
    const Flow f = trial % 2 ? FairCoreFlow(ssi).flow
                             : testing::RandomFeasibleFlow(rng, ssi.base());
    if (CoreCheckSingleSink(ssi, f)) {
      ++maximal;
      EXPECT_TRUE(VerifyCore(ssi.base(), f).in_core) << "trial " << trial;
    }
  }
  EXPECT_GE(maximal, 30);
}

TEST(BicriteriaTest, FourPath) {
  const GameInstance g = testing::FourPathInstance();
  const Flow fair = Flow::FromAmounts({Frac(1, 2), Frac(1, 2)});
  ASSERT_EQ(*g.FindCommodity(1, 4), 0);
  const BicriteriaResult r =
      Bicriteria(g, Frac(1, 2), IncorporateCoreAlgorithm(), fair);
  EXPECT_EQ(r.core_part.amount(*g.FindCommodity(2, 3)), Frac(1, 2));
  EXPECT_EQ(r.flow.amount(*g.FindCommodity(2, 3)), Frac(3, 4));
  EXPECT_EQ(r.flow.amount(*g.FindCommodity(1, 4)), Frac(1, 4));
  EXPECT_EQ(Fairness(r.payoff, {1, 2, 3, 4}), Frac(1, 4));
  EXPECT_TRUE(VerifyApproxCore(g, r.flow, 2).in_core);
}

TEST(BicriteriaTest, GridOnRandomPaths) {
  Rng rng(45);
  for (int trial = 0; trial < 12; ++trial) {
    const GameInstance g = testing::RandomPath(rng, {});
    const FairnessResult fair = FairnessLp(g);
    for (int tenth = 1; tenth <= 9; tenth += 2) {
      const Rational lambda = Frac(tenth, 10);
      const BicriteriaResult r =
          Bicriteria(g, lambda, IncorporateCoreAlgorithm(), fair.witness);
      EXPECT_TRUE(IsFeasible(g, r.flow));
      EXPECT_GE(Fairness(r.payoff, fair.eligible), lambda * fair.tau);
      EXPECT_TRUE(VerifyApproxCore(g, r.flow, 1 / (1 - lambda)).in_core);
    }
  }
}

TEST(BicriteriaTest, SmallLambdaAndZeroFairFlow) {
  const GameInstance g = testing::TwoBottleneckInstance();
  const BicriteriaResult tiny = Bicriteria(g, Frac(1, 100), IncorporateCoreAlgorithm(),
                                           FairnessLp(g).witness);
  EXPECT_TRUE(VerifyApproxCore(g, tiny.flow, Frac(100, 99)).in_core);
  const BicriteriaResult zero =
      Bicriteria(g, Frac(1, 3), IncorporateCoreAlgorithm(), Flow::Zero(g));
  EXPECT_EQ(zero.flow, zero.core_part);
  EXPECT_THROW(Bicriteria(g, 1, IncorporateCoreAlgorithm(), Flow::Zero(g)), Error);
  EXPECT_THROW(Bicriteria(g, 0, IncorporateCoreAlgorithm(), Flow::Zero(g)), Error);
}

TEST(BicriteriaTest, SingleSinkCoreAlgorithm) {
  Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const SingleSinkInstance ssi = testing::RandomSingleSink(rng, {});
    const FairnessResult fair = FairnessLp(ssi.base(), ssi.TerminalNodes());
    const Rational lambda = Frac(1 + trial % 9, 10);
    const BicriteriaResult r = Bicriteria(ssi.base(), lambda,
                                          FairCoreFlowAlgorithm(ssi.sink()),
                                          fair.witness);
    EXPECT_TRUE(IsFeasible(ssi.base(), r.flow));
    EXPECT_GE(Fairness(r.payoff, fair.eligible), lambda * fair.tau);
    EXPECT_TRUE(VerifyApproxCore(ssi.base(), r.flow, 1 / (1 - lambda)).in_core);
  }
}

}  // namespace
}  // namespace flowcore
