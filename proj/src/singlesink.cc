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

#include <algorithm>
#include <deque>
#include <string>

#include "flowcore/error.h"
#include "flowcore/game_lp.h"
#include "flowcore/incorporate.h"
#include "flowcore/verify.h"

namespace flowcore {
namespace {

// Node-split network: v_in = 2(v-1), v_out = 2(v-1)+1, super source 2n.
// Arcs come in pairs (forward even, reverse odd).
class Network {
 public:
  explicit Network(const SingleSinkInstance& instance)
      : instance_(instance), n_(instance.base().num_nodes()), head_(2 * n_ + 1) {
    const GameInstance& g = instance.base();
    node_arc_.resize(n_ + 1);
    for (NodeId v = 1; v <= n_; ++v) node_arc_[v] = AddArc(In(v), Out(v), g.capacity(v));
    for (const auto& [a, b] : g.edges()) {
      AddArc(Out(a), In(b), Capacity::Unbounded());
      AddArc(Out(b), In(a), Capacity::Unbounded());
    }
    for (const Terminal& t : instance.terminals()) {
      terminal_arc_.push_back(AddArc(Source(), In(t.s), Capacity()));
    }
  }

  void SetTerminalCap(int i, const Rational& cap) {
    arcs_[terminal_arc_[i]].cap = Capacity(cap);
  }

  // Augments along shortest residual paths leaving the source through the
  // arcs of `terminals` only. Returns the amount added.
  Rational Augment(const std::vector<int>& terminals) {
    Rational total = 0;
    while (true) {
      std::vector<int> via(head_.size(), -1);
      std::vector<char> seen(head_.size(), 0);
      std::deque<int> queue;
      seen[Source()] = 1;
      for (int i : terminals) {
        const int a = terminal_arc_[i];
        const int x = arcs_[a].to;
        if (!seen[x] && Positive(a)) {
          seen[x] = 1;
          via[x] = a;
          queue.push_back(x);
        }
      }
      const int sink = Out(instance_.sink());
      while (!queue.empty() && !seen[sink]) {
        const int u = queue.front();
        queue.pop_front();
        for (int a : head_[u]) {
          const int x = arcs_[a].to;
          if (seen[x] || !Positive(a)) continue;
          seen[x] = 1;
          via[x] = a;
          queue.push_back(x);
        }
      }
      if (!seen[sink]) return total;
      std::optional<Rational> bottleneck;
      for (int x = sink; x != Source(); x = arcs_[via[x] ^ 1].to) {
        const int a = via[x];
        if (arcs_[a].cap.unbounded() && a % 2 == 0) continue;
        const Rational r = Residual(a);
        if (!bottleneck || r < *bottleneck) bottleneck = r;
      }
      for (int x = sink; x != Source(); x = arcs_[via[x] ^ 1].to) {
        arcs_[via[x]].flow += *bottleneck;
        arcs_[via[x] ^ 1].flow -= *bottleneck;
      }
      total += *bottleneck;
    }
  }

  Rational Throughput(int i) const { return arcs_[terminal_arc_[i]].flow; }

  MaxFlowResult Result() const {
    MaxFlowResult out;
    out.value = 0;
    for (int i = 0; i < instance_.num_terminals(); ++i) {
      out.x.push_back(Throughput(i));
      out.value += Throughput(i);
    }
    out.flow = Decompose();
    std::vector<char> reach(head_.size(), 0);
    std::deque<int> queue = {Source()};
    reach[Source()] = 1;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int a : head_[u]) {
        if (!reach[arcs_[a].to] && Positive(a)) {
          reach[arcs_[a].to] = 1;
          queue.push_back(arcs_[a].to);
        }
      }
    }
    for (NodeId v = 1; v <= n_; ++v) {
      if (reach[In(v)] && !reach[Out(v)]) out.cut_nodes.push_back(v);
    }
    for (int i = 0; i < instance_.num_terminals(); ++i) {
      if (!reach[In(instance_.terminal(i).s)]) out.cut_terminals.push_back(i);
    }
    return out;
  }

 private:
  struct Arc {
    int to;
    Capacity cap;
    Rational flow;
  };

  static int In(NodeId v) { return 2 * (v - 1); }
  static int Out(NodeId v) { return 2 * (v - 1) + 1; }
  int Source() const { return 2 * n_; }

  int AddArc(int from, int to, Capacity cap) {
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({to, std::move(cap), Rational(0)});
    arcs_.push_back({from, Capacity(), Rational(0)});
    head_[from].push_back(id);
    head_[to].push_back(id + 1);
    return id;
  }

  bool Positive(int a) const {
    return (a % 2 == 0 && arcs_[a].cap.unbounded()) || Residual(a) > 0;
  }
  // Precondition: the arc is not an unbounded forward arc.
  Rational Residual(int a) const { return arcs_[a].cap.value() - arcs_[a].flow; }

  // Splits the arc flow into terminal-to-sink paths, cancelling cycles.
  Flow Decompose() const {
    std::vector<Rational> flow(arcs_.size());
    for (size_t a = 0; a < arcs_.size(); a += 2) flow[a] = arcs_[a].flow;
    const int sink = Out(instance_.sink());
    std::vector<PathFlow> paths;
    for (int i = 0; i < instance_.num_terminals(); ++i) {
      Rational& source_flow = flow[terminal_arc_[i]];
      while (source_flow > 0) {
        std::vector<int> stack = {In(instance_.terminal(i).s)};
        std::vector<int> stack_arcs;
        std::vector<int> position(head_.size(), -1);
        position[stack.back()] = 0;
        while (stack.back() != sink) {
          int next_arc = -1;
          for (int a : head_[stack.back()]) {
            if (a % 2 == 0 && flow[a] > 0) {
              next_arc = a;
              break;
            }
          }
          if (next_arc < 0) throw Error(ErrorKind::kSolver, "flow decomposition failed");
          const int x = arcs_[next_arc].to;
          if (position[x] >= 0) {
            Rational low = flow[next_arc];
            for (size_t j = position[x]; j < stack_arcs.size(); ++j) {
              low = std::min(low, flow[stack_arcs[j]]);
            }
            flow[next_arc] -= low;
            for (size_t j = position[x]; j < stack_arcs.size(); ++j) {
              flow[stack_arcs[j]] -= low;
            }
            while (stack.back() != x) {
              position[stack.back()] = -1;
              stack.pop_back();
              stack_arcs.pop_back();
            }
            continue;
          }
          position[x] = static_cast<int>(stack.size());
          stack.push_back(x);
          stack_arcs.push_back(next_arc);
        }
        Rational amount = source_flow;
        for (int a : stack_arcs) amount = std::min(amount, flow[a]);
        source_flow -= amount;
        for (int a : stack_arcs) flow[a] -= amount;
        PathFlow p{instance_.commodity_of(i), {}, amount};
        for (int x : stack) {
          if (x % 2 == 0) p.nodes.push_back(x / 2 + 1);
        }
        paths.push_back(std::move(p));
      }
    }
    return Flow::FromPathsFor(instance_.base(), std::move(paths));
  }

  const SingleSinkInstance& instance_;
  int n_;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> head_;
  std::vector<int> node_arc_;
  std::vector<int> terminal_arc_;
};

void CheckCaps(const SingleSinkInstance& instance, const std::vector<Rational>& caps,
               bool within_demand) {
  if (static_cast<int>(caps.size()) != instance.num_terminals()) {
    throw Error(ErrorKind::kStructural, "one cap per terminal is required");
  }
  for (int i = 0; i < instance.num_terminals(); ++i) {
    if (caps[i] < 0 || (within_demand && caps[i] > instance.terminal(i).demand)) {
      throw Error(ErrorKind::kStructural,
                  "terminal cap out of range for terminal " + std::to_string(i));
    }
  }
}

std::vector<int> AllTerminals(const SingleSinkInstance& instance) {
  std::vector<int> all(instance.num_terminals());
  for (int i = 0; i < instance.num_terminals(); ++i) all[i] = i;
  return all;
}

std::vector<Rational> Demands(const SingleSinkInstance& instance) {
  std::vector<Rational> d;
  for (const Terminal& t : instance.terminals()) d.push_back(t.demand);
  return d;
}

}  // namespace

SingleSinkInstance SingleSinkInstance::FromGame(GameInstance base, NodeId sink) {
  if (sink < 1 || sink > base.num_nodes()) {
    throw Error(ErrorKind::kStructural, "sink is not a node");
  }
  SingleSinkInstance out;
  for (int k = 0; k < base.num_commodities(); ++k) {
    const Commodity& c = base.commodity(k);
    if (!c.Touches(sink)) {
      throw Error(ErrorKind::kStructural,
                  "commodity " + std::to_string(c.u) + "-" + std::to_string(c.v) +
                      " does not end at the sink");
    }
    out.terminals_.push_back({c.Other(sink), c.demand});
    out.commodity_of_.push_back(k);
  }
  out.base_ = std::move(base);
  out.sink_ = sink;
  return out;
}

SingleSinkInstance SingleSinkInstance::Create(int num_nodes, Topology topology,
                                              std::vector<Edge> edges,
                                              std::vector<Capacity> capacity,
                                              NodeId sink,
                                              const std::vector<Terminal>& terminals) {
  std::vector<Commodity> commodities;
  for (const Terminal& t : terminals) {
    commodities.push_back({std::min(t.s, sink), std::max(t.s, sink), t.demand});
  }
  return FromGame(GameInstance::Create(num_nodes, topology, std::move(edges),
                                       std::move(capacity), std::move(commodities)),
                  sink);
}

std::vector<NodeId> SingleSinkInstance::TerminalNodes() const {
  std::vector<NodeId> out;
  for (const Terminal& t : terminals_) out.push_back(t.s);
  std::sort(out.begin(), out.end());
  return out;
}

MaxFlowResult MaxFlowNodeCap(const SingleSinkInstance& instance,
                             const std::vector<Rational>& caps) {
  CheckCaps(instance, caps, false);
  Network network(instance);
  for (int i = 0; i < instance.num_terminals(); ++i) network.SetTerminalCap(i, caps[i]);
  network.Augment(AllTerminals(instance));
  return network.Result();
}

MaxFlowResult PolymatroidGreedy(const SingleSinkInstance& instance,
                                const std::vector<int>& order,
                                const std::vector<Rational>& caps) {
  CheckCaps(instance, caps, true);
  Network network(instance);
  for (int i = 0; i < instance.num_terminals(); ++i) network.SetTerminalCap(i, caps[i]);
  for (int i : order) {
    if (i < 0 || i >= instance.num_terminals()) {
      throw Error(ErrorKind::kStructural, "terminal order out of range");
    }
    network.Augment({i});
  }
  return network.Result();
}

FairCoreFlowResult FairCoreFlow(const SingleSinkInstance& instance) {
  const int k = instance.num_terminals();
  if (k == 0) throw Error(ErrorKind::kStructural, "no terminals");
  const std::vector<Rational> demand = Demands(instance);
  Rational tau = *std::min_element(demand.begin(), demand.end());
  while (true) {
    const MaxFlowResult probe =
        MaxFlowNodeCap(instance, std::vector<Rational>(k, tau));
    if (probe.value == tau * k) break;
    Rational fixed = 0;
    for (NodeId v : probe.cut_nodes) fixed += instance.base().capacity(v).value();
    const int cut = static_cast<int>(probe.cut_terminals.size());
    tau = fixed / (k - cut);
  }

  FairCoreFlowResult out;
  out.tau = tau;
  Network network(instance);
  const std::vector<int> order = AllTerminals(instance);
  for (int i = 0; i < k; ++i) network.SetTerminalCap(i, tau);
  for (int i : order) network.Augment({i});
  for (int i = 0; i < k; ++i) {
    out.phase_one.push_back(network.Throughput(i));
    if (out.phase_one.back() != tau) {
      throw Error(ErrorKind::kSolver, "phase one did not reach tau");
    }
  }
  for (int i = 0; i < k; ++i) network.SetTerminalCap(i, demand[i]);
  for (int i : order) network.Augment({i});
  MaxFlowResult result = network.Result();
  out.flow = std::move(result.flow);
  out.x = std::move(result.x);

  try {
    const FairnessResult lp = FairnessLp(instance.base(), instance.TerminalNodes());
    if (lp.tau != tau) {
      throw Error(ErrorKind::kSolver, "fairness LP gives " + ToString(lp.tau) +
                                          ", parametric search gives " +
                                          ToString(tau));
    }
    out.lp_checked = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kBudgetExceeded) throw;
  }
  return out;
}

bool CoreCheckSingleSink(const SingleSinkInstance& instance, const Flow& flow) {
  if (!IsFeasible(instance.base(), flow)) {
    throw Error(ErrorKind::kStructural, "infeasible flow");
  }
  Rational routed = 0;
  for (int i = 0; i < instance.num_terminals(); ++i) {
    routed += flow.amount(instance.commodity_of(i));
  }
  return routed == MaxFlowNodeCap(instance, Demands(instance)).value;
}

CoreAlgorithm IncorporateCoreAlgorithm() {
  return [](const GameInstance& g) {
    if (g.is_spider()) return IncorporateSpider(g).flow;
    if (!g.is_path()) {
      throw Error(ErrorKind::kUnsupportedTopology,
                  "incorporation needs a path or spider");
    }
    IncorporationOrder order;
    order.start = 1;
    for (NodeId v = 2; v <= g.num_nodes(); ++v) order.sequence.push_back(v);
    return Incorporate(g, order).flow;
  };
}

CoreAlgorithm FairCoreFlowAlgorithm(NodeId sink) {
  return [sink](const GameInstance& g) {
    return FairCoreFlow(SingleSinkInstance::FromGame(g, sink)).flow;
  };
}

BicriteriaResult Bicriteria(const GameInstance& instance, const Rational& lambda,
                            const CoreAlgorithm& core_algorithm,
                            const Flow& fair_flow) {
  if (lambda <= 0 || lambda >= 1) {
    throw Error(ErrorKind::kStructural, "lambda must lie in (0, 1)");
  }
  const FeasibilityReport report = CheckFeasibility(instance, fair_flow);
  if (!report.feasible) {
    throw Error(ErrorKind::kStructural,
                "infeasible fairness flow: " + report.first_violation->Describe());
  }
  BicriteriaResult out;
  out.core_part = core_algorithm(ScaleInstance(instance, 1 - lambda));
  out.flow = out.core_part.Plus(fair_flow.Scaled(lambda));
  const FeasibilityReport combined = CheckFeasibility(instance, out.flow);
  if (!combined.feasible) {
    throw Error(ErrorKind::kSolver,
                "combined flow infeasible: " + combined.first_violation->Describe());
  }
  out.payoff = Payoff(instance, out.flow);
  return out;
}

}  // namespace flowcore
