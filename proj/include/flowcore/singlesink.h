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

#ifndef FLOWCORE_SINGLESINK_H_
#define FLOWCORE_SINGLESINK_H_

#include <functional>
#include <optional>
#include <vector>

#include "flowcore/model.h"

namespace flowcore {

struct Terminal {
  NodeId s = 0;
  Rational demand;
};

// A game whose commodities all end at one sink t. Terminal i is commodity
// commodity_of(i) of base().
class SingleSinkInstance {
 public:
  // Throws Error(kStructural) unless every commodity of `base` touches `sink`.
  static SingleSinkInstance FromGame(GameInstance base, NodeId sink);
  static SingleSinkInstance Create(int num_nodes, Topology topology,
                                   std::vector<Edge> edges,
                                   std::vector<Capacity> capacity, NodeId sink,
                                   const std::vector<Terminal>& terminals);

  const GameInstance& base() const { return base_; }
  NodeId sink() const { return sink_; }
  int num_terminals() const { return static_cast<int>(terminals_.size()); }
  const Terminal& terminal(int i) const { return terminals_[i]; }
  const std::vector<Terminal>& terminals() const { return terminals_; }
  int commodity_of(int i) const { return commodity_of_[i]; }
  std::vector<NodeId> TerminalNodes() const;

 private:
  GameInstance base_;
  NodeId sink_ = 0;
  std::vector<Terminal> terminals_;
  std::vector<int> commodity_of_;
};

// Per-terminal throughput x_i.
using RoutableVector = std::vector<Rational>;

struct MaxFlowResult {
  Rational value;
  RoutableVector x;
  Flow flow;                        // on base(), decomposed into s_i-t paths
  std::vector<NodeId> cut_nodes;    // nodes whose capacity arc is cut
  std::vector<int> cut_terminals;   // terminals whose source arc is cut
};

// Maximum flow to the sink when terminal i may send at most caps[i]
// (node capacities apply to every node, the sink included).
MaxFlowResult MaxFlowNodeCap(const SingleSinkInstance& instance,
                             const std::vector<Rational>& caps);

// Terminals processed in `order`, each augmented to its maximum without
// reducing earlier throughputs. Requires caps[i] <= d_i.
MaxFlowResult PolymatroidGreedy(const SingleSinkInstance& instance,
                                const std::vector<int>& order,
                                const std::vector<Rational>& caps);

struct FairCoreFlowResult {
  Flow flow;
  RoutableVector x;
  RoutableVector phase_one;
  Rational tau;
  bool lp_checked = false;  // tau was confirmed by the fairness LP
};

// Largest tau such that every terminal can route min(tau, d_i) at once, then
// greedy augmentation to a maximum flow. Throws Error(kStructural) without
// terminals and Error(kSolver) if the fairness LP disagrees.
FairCoreFlowResult FairCoreFlow(const SingleSinkInstance& instance);

// Sufficient test: sum of terminal payoffs equals the maximum flow.
bool CoreCheckSingleSink(const SingleSinkInstance& instance, const Flow& flow);

using CoreAlgorithm = std::function<Flow(const GameInstance&)>;

// Incorporation from node 1 on paths (the spider default on spiders).
CoreAlgorithm IncorporateCoreAlgorithm();
// FairCoreFlow, treating the scaled game as single-sink with `sink`.
CoreAlgorithm FairCoreFlowAlgorithm(NodeId sink);

struct BicriteriaResult {
  Flow flow;
  PayoffVector payoff;
  Flow core_part;  // computed on the (1 - lambda)-scaled game
};

// core_algorithm on the (1 - lambda)-scaled game plus lambda * fair_flow.
// Throws Error(kStructural) unless 0 < lambda < 1.
BicriteriaResult Bicriteria(const GameInstance& instance, const Rational& lambda,
                            const CoreAlgorithm& core_algorithm,
                            const Flow& fair_flow);

}  // namespace flowcore

#endif  // FLOWCORE_SINGLESINK_H_
