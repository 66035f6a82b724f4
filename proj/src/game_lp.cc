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

#include <algorithm>
#include <functional>

#include "flowcore/error.h"

namespace flowcore {
namespace {

std::vector<std::vector<NodeId>> SimplePaths(const GameInstance& instance,
                                             const std::vector<char>& mask,
                                             NodeId from, NodeId to) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> current = {from};
  std::vector<char> on_path(instance.num_nodes() + 1, 0);
  on_path[from] = 1;
  std::function<void(NodeId)> extend = [&](NodeId v) {
    if (v == to) {
      out.push_back(current);
      if (static_cast<int>(out.size()) > kMaxPathsPerCommodity) {
        throw Error(ErrorKind::kBudgetExceeded,
                    "more than " + std::to_string(kMaxPathsPerCommodity) +
                        " simple paths for commodity " + std::to_string(from) +
                        "-" + std::to_string(to));
      }
      return;
    }
    for (NodeId w : instance.neighbors(v)) {
      if (!mask[w] || on_path[w]) continue;
      on_path[w] = 1;
      current.push_back(w);
      extend(w);
      current.pop_back();
      on_path[w] = 0;
    }
  };
  extend(from);
  return out;
}

std::vector<char> FullMask(const GameInstance& instance) {
  std::vector<char> mask(instance.num_nodes() + 1, 1);
  mask[0] = 0;
  return mask;
}

}  // namespace

std::vector<std::vector<std::vector<NodeId>>> RoutingPaths(
    const GameInstance& instance, const std::vector<char>& mask) {
  std::vector<std::vector<std::vector<NodeId>>> paths(instance.num_commodities());
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    if (!mask[c.u] || !mask[c.v]) continue;
    if (instance.has_unique_paths()) {
      const auto& p = instance.CommodityPath(k);
      if (std::all_of(p.begin(), p.end(), [&](NodeId v) { return mask[v]; })) {
        paths[k].push_back(p);
      }
    } else {
      paths[k] = SimplePaths(instance, mask, c.u, c.v);
    }
  }
  return paths;
}

Flow FlowLp::ToFlow(const GameInstance& instance,
                    const std::vector<Rational>& point) const {
  std::vector<PathFlow> flows;
  for (size_t j = 0; j < path_of_var.size(); ++j) {
    if (point[j] == 0) continue;
    PathFlow p = path_of_var[j];
    p.amount = point[j];
    flows.push_back(std::move(p));
  }
  return Flow::FromPathsFor(instance, std::move(flows));
}

FlowLp BuildFlowLp(const GameInstance& instance, const std::vector<char>& mask) {
  FlowLp model;
  model.payoff_vars.assign(instance.num_nodes() + 1, {});
  const auto paths = RoutingPaths(instance, mask);
  std::vector<std::vector<int>> uses(instance.num_nodes() + 1);
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    std::vector<int> vars;
    for (const auto& p : paths[k]) {
      std::optional<Rational> upper;
      if (paths[k].size() == 1) upper = c.demand;
      const int j = model.lp.AddVariable(
          0, 0, upper, "f" + std::to_string(c.u) + "_" + std::to_string(c.v) +
                           (paths[k].size() > 1 ? "_" + std::to_string(vars.size())
                                                : ""));
      model.path_of_var.push_back({k, p, Rational(0)});
      vars.push_back(j);
      for (NodeId v : p) uses[v].push_back(j);
      model.payoff_vars[c.u].push_back(j);
      model.payoff_vars[c.v].push_back(j);
    }
    if (vars.size() == 1) {
      model.demand_var[k] = vars[0];
    } else if (vars.size() > 1) {
      std::vector<LinearTerm> terms;
      for (int j : vars) terms.push_back({j, 1});
      model.demand_row[k] = model.lp.AddConstraint(
          terms, Relation::kLessEqual, c.demand,
          "dem_" + std::to_string(c.u) + "_" + std::to_string(c.v));
    }
  }
  for (NodeId v = 1; v <= instance.num_nodes(); ++v) {
    if (!mask[v] || instance.capacity(v).unbounded() || uses[v].empty()) continue;
    std::vector<LinearTerm> terms;
    for (int j : uses[v]) terms.push_back({j, 1});
    model.capacity_row[v] = model.lp.AddConstraint(
        terms, Relation::kLessEqual, instance.capacity(v).value(),
        "cap_" + std::to_string(v));
  }
  return model;
}

namespace {

struct DeviationModel {
  FlowLp flow;
  int delta = 0;
  std::map<NodeId, int> payoff_row;
};

DeviationModel BuildDeviationModel(const GameInstance& instance,
                                   const PayoffVector& target,
                                   const std::vector<NodeId>& coalition) {
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  if (members.empty() ||
      static_cast<int>(members.size()) == instance.num_nodes()) {
    throw Error(ErrorKind::kStructural,
                "deviation needs a nonempty proper coalition");
  }
  DeviationModel model;
  const std::vector<char> mask = CoalitionMask(members, instance.num_nodes());
  model.flow = BuildFlowLp(instance, mask);
  Rational top = 0;
  for (NodeId v : members) top = std::max(top, target[v]);
  // The payoff rows force delta >= -max target at every optimum, so this
  // bound is never active and the payoff-row duals sum to one.
  model.delta = model.flow.lp.AddVariable(1, -(top + 1), std::nullopt, "delta");
  for (NodeId v : members) {
    std::vector<LinearTerm> terms = {{model.delta, 1}};
    for (int j : model.flow.payoff_vars[v]) terms.push_back({j, -1});
    model.payoff_row[v] = model.flow.lp.AddConstraint(
        terms, Relation::kLessEqual, -target[v], "pay_" + std::to_string(v));
  }
  return model;
}

}  // namespace

LinearProgram BuildDeviationLp(const GameInstance& instance,
                               const PayoffVector& target,
                               const std::vector<NodeId>& coalition) {
  return BuildDeviationModel(instance, target, coalition).flow.lp;
}

DeviationResult DeviationMargin(const GameInstance& instance,
                                const PayoffVector& target,
                                const std::vector<NodeId>& coalition) {
  const DeviationModel model = BuildDeviationModel(instance, target, coalition);
  const LpOutcome out = Solve(model.flow.lp);
  if (out.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kSolver, "deviation LP is " + ToString(out.status));
  }
  DeviationResult result;
  result.margin = out.value;
  result.witness = model.flow.ToFlow(instance, out.point);
  result.y = NodeMap<Rational>(instance.num_nodes(), Rational(0));
  result.w = NodeMap<Rational>(instance.num_nodes(), Rational(0));
  for (const auto& [v, row] : model.flow.capacity_row) result.y[v] = out.duals[row];
  for (const auto& [v, row] : model.payoff_row) result.w[v] = out.duals[row];
  for (const auto& [k, row] : model.flow.demand_row) result.z[k] = out.duals[row];
  for (const auto& [k, var] : model.flow.demand_var) {
    const Rational& r = out.reduced_costs[var];
    result.z[k] = r > 0 ? r : Rational(0);
  }
  return result;
}

WelfareResult SocialWelfareLp(const GameInstance& instance) {
  FlowLp model = BuildFlowLp(instance, FullMask(instance));
  for (int j = 0; j < model.lp.num_variables(); ++j) model.lp.SetObjective(j, 1);
  const LpOutcome out = Solve(model.lp);
  if (out.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kSolver, "welfare LP is " + ToString(out.status));
  }
  WelfareResult result;
  result.total_flow = out.value;
  result.social_welfare = 2 * out.value;
  result.witness = model.ToFlow(instance, out.point);
  return result;
}

namespace {

std::vector<NodeId> ResolveEligible(
    const GameInstance& instance,
    const std::optional<std::vector<NodeId>>& eligible) {
  std::vector<NodeId> nodes = eligible
                                  ? NormalizeCoalition(*eligible, instance.num_nodes())
                                  : instance.DemandIncidentNodes();
  if (nodes.empty()) {
    throw Error(ErrorKind::kStructural, "fairness needs a nonempty eligible set");
  }
  return nodes;
}

}  // namespace

FairnessResult FairnessLp(const GameInstance& instance,
                          const std::optional<std::vector<NodeId>>& eligible) {
  FairnessResult result;
  result.eligible = ResolveEligible(instance, eligible);
  FlowLp model = BuildFlowLp(instance, FullMask(instance));
  const int tau = model.lp.AddVariable(1, 0, std::nullopt, "tau");
  for (NodeId v : result.eligible) {
    std::vector<LinearTerm> terms = {{tau, 1}};
    for (int j : model.payoff_vars[v]) terms.push_back({j, -1});
    model.lp.AddConstraint(terms, Relation::kLessEqual, 0,
                           "fair_" + std::to_string(v));
  }
  const LpOutcome out = Solve(model.lp);
  if (out.status != LpStatus::kOptimal) {
    throw Error(ErrorKind::kSolver, "fairness LP is " + ToString(out.status));
  }
  result.tau = out.value;
  result.witness = model.ToFlow(instance, out.point);
  return result;
}

bool FairnessFeasible(const GameInstance& instance,
                      const std::vector<NodeId>& eligible, const Rational& tau) {
  const std::vector<NodeId> nodes = ResolveEligible(instance, eligible);
  FlowLp model = BuildFlowLp(instance, FullMask(instance));
  for (NodeId v : nodes) {
    std::vector<LinearTerm> terms;
    for (int j : model.payoff_vars[v]) terms.push_back({j, 1});
    model.lp.AddConstraint(terms, Relation::kGreaterEqual, tau,
                           "fair_" + std::to_string(v));
  }
  return Solve(model.lp).status == LpStatus::kOptimal;
}

}  // namespace flowcore
