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

#ifndef FLOWCORE_GAME_LP_H_
#define FLOWCORE_GAME_LP_H_

#include <map>
#include <optional>
#include <vector>

#include "flowcore/model.h"
#include "flowcore/simplex.h"

namespace flowcore {

// Simple-path enumeration cap per commodity on general graphs.
inline constexpr int kMaxPathsPerCommodity = 10'000;

// Routing paths of every commodity inside the node set `mask` (1-based,
// index 0 unused): the unique tree path when it stays inside the mask, or
// all simple paths on general graphs. Commodities with an endpoint outside
// the mask get no paths. Throws Error(kBudgetExceeded) past the cap.
std::vector<std::vector<std::vector<NodeId>>> RoutingPaths(
    const GameInstance& instance, const std::vector<char>& mask);

// Flow-polytope LP over path variables restricted to `mask`: one variable
// per routing path, capacity rows for bounded nodes in the mask, and demand
// limits (a variable bound when a commodity has one path, a row otherwise).
struct FlowLp {
  LinearProgram lp;
  std::vector<PathFlow> path_of_var;  // amount unused
  std::map<NodeId, int> capacity_row;
  std::map<int, int> demand_row;  // commodity -> row, multi-path commodities
  std::map<int, int> demand_var;  // commodity -> bounded variable
  // Variables whose flow counts toward node v's payoff.
  std::vector<std::vector<int>> payoff_vars;  // index by node

  Flow ToFlow(const GameInstance& instance,
              const std::vector<Rational>& point) const;
};

FlowLp BuildFlowLp(const GameInstance& instance, const std::vector<char>& mask);

// Best uniform improvement over `target` that coalition S can secure alone:
// delta* = max delta such that some flow inside G[S] gives every v in S a
// payoff of at least target_v + delta. S deviates iff delta* > 0.
struct DeviationResult {
  Rational margin;
  Flow witness;  // on the full instance, zero outside G[S]
  // Optimal dual of the margin LP, in certificate coordinates. sum w = 1.
  NodeMap<Rational> y;          // capacity rows
  NodeMap<Rational> w;          // payoff rows
  std::map<int, Rational> z;    // demand limits, commodities of H[S]
};

// S must be a nonempty proper subset; G[S] need not be connected.
DeviationResult DeviationMargin(const GameInstance& instance,
                                const PayoffVector& target,
                                const std::vector<NodeId>& coalition);

// The margin LP itself, for debugging dumps. Variables are the path flows
// followed by delta.
LinearProgram BuildDeviationLp(const GameInstance& instance,
                               const PayoffVector& target,
                               const std::vector<NodeId>& coalition);

struct WelfareResult {
  Rational social_welfare;  // 2 * total flow
  Rational total_flow;
  Flow witness;
};

// Maximum social welfare over all feasible flows (stability ignored).
WelfareResult SocialWelfareLp(const GameInstance& instance);

struct FairnessResult {
  Rational tau;
  Flow witness;
  std::vector<NodeId> eligible;
};

// max tau such that some feasible flow pays every eligible node at least
// tau. Eligibility defaults to the demand-incident nodes; an empty set is a
// structural error.
FairnessResult FairnessLp(
    const GameInstance& instance,
    const std::optional<std::vector<NodeId>>& eligible = std::nullopt);

// Whether some feasible flow pays every eligible node at least tau.
bool FairnessFeasible(const GameInstance& instance,
                      const std::vector<NodeId>& eligible, const Rational& tau);

}  // namespace flowcore

#endif  // FLOWCORE_GAME_LP_H_
