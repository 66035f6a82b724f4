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

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "flowcore/error.h"

namespace flowcore {
namespace {

[[noreturn]] void Structural(const std::string& what) {
  throw Error(ErrorKind::kStructural, what);
}

void CheckNode(NodeId v, int n, const char* what) {
  if (v < 1 || v > n) {
    Structural(std::string(what) + ": node " + std::to_string(v) +
               " is outside 1.." + std::to_string(n));
  }
}

}  // namespace

const Rational& Capacity::value() const {
  if (unbounded_) {
    throw Error(ErrorKind::kStructural, "unbounded capacity has no value");
  }
  return value_;
}

std::string ToString(const Capacity& c) {
  return c.unbounded() ? "inf" : ToString(c.value());
}

GameInstance GameInstance::Create(int num_nodes, Topology topology,
                                  std::vector<Edge> edges,
                                  std::vector<Capacity> capacity,
                                  std::vector<Commodity> commodities) {
  if (num_nodes < 1) Structural("an instance needs at least one node");
  if (static_cast<int>(capacity.size()) != num_nodes) {
    Structural("expected " + std::to_string(num_nodes) + " capacities, got " +
               std::to_string(capacity.size()));
  }
  GameInstance g;
  g.num_nodes_ = num_nodes;
  g.topology_ = topology;
  g.capacity_ = NodeMap<Capacity>(num_nodes);
  for (NodeId v = 1; v <= num_nodes; ++v) {
    const Capacity& c = capacity[v - 1];
    if (!c.unbounded() && c.value() < 0) {
      Structural("negative capacity at node " + std::to_string(v));
    }
    g.capacity_[v] = c;
  }

  std::vector<Edge> path_edges;
  for (NodeId v = 1; v < num_nodes; ++v) path_edges.emplace_back(v, v + 1);
  if (topology.kind == TopologyKind::kPath && edges.empty()) edges = path_edges;

  std::set<Edge> seen;
  for (auto& [a, b] : edges) {
    CheckNode(a, num_nodes, "edge");
    CheckNode(b, num_nodes, "edge");
    if (a == b) Structural("self-loop at node " + std::to_string(a));
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) {
      Structural("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    }
  }
  std::sort(edges.begin(), edges.end());
  if (topology.kind == TopologyKind::kPath && edges != path_edges) {
    Structural("path topology requires the edges i-(i+1) in id order");
  }
  g.edges_ = std::move(edges);
  g.adjacency_.assign(num_nodes + 1, {});
  for (const auto& [a, b] : g.edges_) {
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());

  if (!IsConnected(g, std::vector<char>(num_nodes + 1, 1))) {
    Structural("supply graph is not connected");
  }
  if (topology.kind == TopologyKind::kSpider) {
    CheckNode(topology.root, num_nodes, "spider root");
    if (static_cast<int>(g.edges_.size()) != num_nodes - 1) {
      Structural("spider supply graph must be a tree");
    }
    for (NodeId v = 1; v <= num_nodes; ++v) {
      if (g.adjacency_[v].size() > 2 && v != topology.root) {
        Structural("node " + std::to_string(v) +
                   " has degree > 2 but is not the spider root");
      }
    }
  } else if (topology.kind == TopologyKind::kGeneral) {
    g.topology_.root = 0;
  } else {
    g.topology_.root = 0;
  }

  std::set<std::pair<NodeId, NodeId>> pairs;
  for (Commodity& c : commodities) {
    CheckNode(c.u, num_nodes, "commodity");
    CheckNode(c.v, num_nodes, "commodity");
    if (c.u == c.v) {
      Structural("commodity endpoints must differ (node " + std::to_string(c.u) +
                 ")");
    }
    if (c.demand < 0) Structural("negative demand");
    if (c.u > c.v) std::swap(c.u, c.v);
    if (!pairs.insert({c.u, c.v}).second) {
      Structural("duplicate commodity " + std::to_string(c.u) + "-" +
                 std::to_string(c.v));
    }
  }
  std::sort(commodities.begin(), commodities.end(),
            [](const Commodity& a, const Commodity& b) {
              return std::pair(a.u, a.v) < std::pair(b.u, b.v);
            });
  g.commodities_ = std::move(commodities);
  g.incident_.assign(num_nodes + 1, {});
  for (int k = 0; k < g.num_commodities(); ++k) {
    g.incident_[g.commodities_[k].u].push_back(k);
    g.incident_[g.commodities_[k].v].push_back(k);
  }
  if (g.has_unique_paths()) g.BuildTreeIndex();
  return g;
}

GameInstance GameInstance::MakePath(std::vector<Capacity> capacity,
                                    std::vector<Commodity> commodities) {
  const int n = static_cast<int>(capacity.size());
  return Create(n, Topology::Path(), {}, std::move(capacity),
                std::move(commodities));
}

void GameInstance::BuildTreeIndex() {
  const NodeId root = is_spider() ? topology_.root : 1;
  parent_.assign(num_nodes_ + 1, 0);
  depth_.assign(num_nodes_ + 1, -1);
  leg_.assign(num_nodes_ + 1, 0);
  num_legs_ = static_cast<int>(adjacency_[root].size());
  std::deque<NodeId> queue = {root};
  depth_[root] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (size_t i = 0; i < adjacency_[v].size(); ++i) {
      NodeId w = adjacency_[v][i];
      if (depth_[w] >= 0) continue;
      depth_[w] = depth_[v] + 1;
      parent_[w] = v;
      leg_[w] = v == root ? static_cast<int>(i) + 1 : leg_[v];
      queue.push_back(w);
    }
  }
  commodity_paths_.clear();
  commodity_paths_.reserve(commodities_.size());
  for (const Commodity& c : commodities_) {
    commodity_paths_.push_back(TreePath(c.u, c.v));
  }
}

bool GameInstance::Adjacent(NodeId a, NodeId b) const {
  const auto& nbrs = adjacency_[a];
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

std::optional<int> GameInstance::FindCommodity(NodeId a, NodeId b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(commodities_.begin(), commodities_.end(),
                             std::pair(a, b),
                             [](const Commodity& c, const std::pair<int, int>& p) {
                               return std::pair(c.u, c.v) < p;
                             });
  if (it != commodities_.end() && it->u == a && it->v == b) {
    return static_cast<int>(it - commodities_.begin());
  }
  return std::nullopt;
}

const std::vector<NodeId>& GameInstance::CommodityPath(int k) const {
  if (!has_unique_paths()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "commodity paths are not unique on a general supply graph");
  }
  return commodity_paths_[k];
}

std::vector<NodeId> GameInstance::TreePath(NodeId a, NodeId b) const {
  if (!has_unique_paths()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "tree paths requested on a general supply graph");
  }
  std::vector<NodeId> head;
  std::vector<NodeId> tail;
  while (a != b) {
    if (depth_[a] >= depth_[b]) {
      head.push_back(a);
      a = parent_[a];
    } else {
      tail.push_back(b);
      b = parent_[b];
    }
  }
  head.push_back(a);
  head.insert(head.end(), tail.rbegin(), tail.rend());
  return head;
}

int GameInstance::TreeDistance(NodeId a, NodeId b) const {
  return static_cast<int>(TreePath(a, b).size()) - 1;
}

std::vector<NodeId> GameInstance::DemandIncidentNodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 1; v <= num_nodes_; ++v) {
    for (int k : incident_[v]) {
      if (commodities_[k].demand > 0) {
        out.push_back(v);
        break;
      }
    }
  }
  return out;
}

Flow Flow::Zero(const GameInstance& instance) {
  Flow f;
  f.unique_path_mode_ = instance.has_unique_paths();
  f.totals_.assign(instance.num_commodities(), Rational(0));
  return f;
}

Flow Flow::FromAmounts(std::vector<Rational> amounts) {
  Flow f;
  f.unique_path_mode_ = true;
  f.totals_ = std::move(amounts);
  return f;
}

Flow Flow::FromPaths(int num_commodities, std::vector<PathFlow> paths) {
  Flow f;
  f.unique_path_mode_ = false;
  f.totals_.assign(num_commodities, Rational(0));
  for (const PathFlow& p : paths) {
    if (p.commodity < 0 || p.commodity >= num_commodities) {
      Structural("path flow refers to unknown commodity " +
                 std::to_string(p.commodity));
    }
    f.totals_[p.commodity] += p.amount;
  }
  f.paths_ = std::move(paths);
  return f;
}

Flow Flow::FromPathsFor(const GameInstance& instance,
                        std::vector<PathFlow> paths) {
  if (!instance.has_unique_paths()) {
    return FromPaths(instance.num_commodities(), std::move(paths));
  }
  Flow f = Zero(instance);
  for (const PathFlow& p : paths) {
    if (p.commodity < 0 || p.commodity >= instance.num_commodities()) {
      Structural("path flow refers to unknown commodity " +
                 std::to_string(p.commodity));
    }
    f.totals_[p.commodity] += p.amount;
  }
  return f;
}

std::vector<PathFlow> Flow::PositivePaths(const GameInstance& instance) const {
  std::vector<PathFlow> out;
  if (unique_path_mode_) {
    for (int k = 0; k < num_commodities(); ++k) {
      if (totals_[k] > 0) {
        out.push_back({k, instance.CommodityPath(k), totals_[k]});
      }
    }
  } else {
    for (const PathFlow& p : paths_) {
      if (p.amount > 0) out.push_back(p);
    }
  }
  return out;
}

void Flow::Validate(const GameInstance& instance) const {
  if (num_commodities() != instance.num_commodities()) {
    Structural("flow has " + std::to_string(num_commodities()) +
               " commodity entries, instance has " +
               std::to_string(instance.num_commodities()));
  }
  if (unique_path_mode_) {
    if (!instance.has_unique_paths()) {
      Structural("unique-path flow on a general supply graph");
    }
    return;
  }
  for (const PathFlow& p : paths_) {
    const Commodity& c = instance.commodity(p.commodity);
    if (p.nodes.size() < 2) Structural("path flow with fewer than two nodes");
    const NodeId first = p.nodes.front();
    const NodeId last = p.nodes.back();
    if (!((first == c.u && last == c.v) || (first == c.v && last == c.u))) {
      Structural("path does not join the endpoints of its commodity");
    }
    std::set<NodeId> visited;
    for (size_t i = 0; i < p.nodes.size(); ++i) {
      CheckNode(p.nodes[i], instance.num_nodes(), "path");
      if (!visited.insert(p.nodes[i]).second) Structural("path is not simple");
      if (i > 0 && !instance.Adjacent(p.nodes[i - 1], p.nodes[i])) {
        Structural("path uses a non-edge");
      }
    }
  }
}

Flow Flow::Plus(const Flow& other) const {
  if (unique_path_mode_ != other.unique_path_mode_ ||
      num_commodities() != other.num_commodities()) {
    Structural("cannot add flows of different shapes");
  }
  if (unique_path_mode_) {
    std::vector<Rational> sum = totals_;
    for (int k = 0; k < num_commodities(); ++k) sum[k] += other.totals_[k];
    return FromAmounts(std::move(sum));
  }
  std::map<std::pair<int, std::vector<NodeId>>, Rational> merged;
  for (const auto* src : {&paths_, &other.paths_}) {
    for (const PathFlow& p : *src) merged[{p.commodity, p.nodes}] += p.amount;
  }
  std::vector<PathFlow> paths;
  for (auto& [key, amount] : merged) paths.push_back({key.first, key.second, amount});
  return FromPaths(num_commodities(), std::move(paths));
}

Flow Flow::Scaled(const Rational& factor) const {
  Flow f = *this;
  for (Rational& t : f.totals_) t *= factor;
  for (PathFlow& p : f.paths_) p.amount *= factor;
  return f;
}

bool operator==(const Flow& a, const Flow& b) {
  if (a.unique_path_mode_ != b.unique_path_mode_ || a.totals_ != b.totals_ ||
      a.paths_.size() != b.paths_.size()) {
    return false;
  }
  for (size_t i = 0; i < a.paths_.size(); ++i) {
    if (a.paths_[i].commodity != b.paths_[i].commodity ||
        a.paths_[i].nodes != b.paths_[i].nodes ||
        a.paths_[i].amount != b.paths_[i].amount) {
      return false;
    }
  }
  return true;
}

PayoffVector Payoff(const GameInstance& instance, const Flow& flow) {
  flow.Validate(instance);
  PayoffVector pay(instance.num_nodes(), Rational(0));
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Rational& f = flow.amount(k);
    if (f == 0) continue;
    pay[instance.commodity(k).u] += f;
    pay[instance.commodity(k).v] += f;
  }
  return pay;
}

NodeMap<Rational> NodeUsage(const GameInstance& instance, const Flow& flow) {
  NodeMap<Rational> usage(instance.num_nodes(), Rational(0));
  for (const PathFlow& p : flow.PositivePaths(instance)) {
    for (NodeId v : p.nodes) usage[v] += p.amount;
  }
  return usage;
}

Rational SocialWelfare(const PayoffVector& payoff) {
  Rational total = 0;
  for (const Rational& p : payoff) total += p;
  return total;
}

Rational Fairness(const PayoffVector& payoff,
                  const std::vector<NodeId>& eligible) {
  if (eligible.empty()) return 0;
  Rational best = payoff[eligible.front()];
  for (NodeId v : eligible) best = std::min(best, payoff[v]);
  return best;
}

std::string Violation::Describe() const {
  switch (kind) {
    case Kind::kNegative:
      return "negative flow on commodity " + std::to_string(commodity);
    case Kind::kCapacity:
      return "node " + std::to_string(node) + " carries " + ToString(load) +
             " > capacity " + ToString(bound);
    case Kind::kDemand:
      return "commodity " + std::to_string(commodity) + " routes " +
             ToString(load) + " > demand " + ToString(bound);
  }
  return "unknown violation";
}

FeasibilityReport CheckFeasibility(const GameInstance& instance,
                                   const Flow& flow) {
  flow.Validate(instance);
  FeasibilityReport report;
  auto fail = [&](Violation v) {
    report.feasible = false;
    report.first_violation = std::move(v);
    return report;
  };
  for (int k = 0; k < flow.num_commodities(); ++k) {
    if (flow.amount(k) < 0) {
      return fail({Violation::Kind::kNegative, 0, k, flow.amount(k), 0});
    }
  }
  for (const PathFlow& p : flow.paths()) {
    if (p.amount < 0) {
      return fail({Violation::Kind::kNegative, 0, p.commodity, p.amount, 0});
    }
  }
  const NodeMap<Rational> usage = NodeUsage(instance, flow);
  for (NodeId v = 1; v <= instance.num_nodes(); ++v) {
    if (instance.capacity(v) < usage[v]) {
      return fail({Violation::Kind::kCapacity, v, -1, usage[v],
                   instance.capacity(v).value()});
    }
  }
  for (int k = 0; k < instance.num_commodities(); ++k) {
    if (flow.amount(k) > instance.commodity(k).demand) {
      return fail({Violation::Kind::kDemand, 0, k, flow.amount(k),
                   instance.commodity(k).demand});
    }
  }
  return report;
}

std::vector<NodeId> NormalizeCoalition(std::vector<NodeId> nodes,
                                       int num_nodes) {
  for (NodeId v : nodes) CheckNode(v, num_nodes, "coalition");
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

std::vector<char> CoalitionMask(const std::vector<NodeId>& coalition,
                                int num_nodes) {
  std::vector<char> mask(num_nodes + 1, 0);
  for (NodeId v : coalition) {
    CheckNode(v, num_nodes, "coalition");
    mask[v] = 1;
  }
  return mask;
}

bool IsConnected(const GameInstance& instance, const std::vector<char>& mask) {
  NodeId start = 0;
  int members = 0;
  for (NodeId v = 1; v <= instance.num_nodes(); ++v) {
    if (mask[v]) {
      ++members;
      if (start == 0) start = v;
    }
  }
  if (members == 0) return false;
  std::vector<char> seen(instance.num_nodes() + 1, 0);
  std::vector<NodeId> stack = {start};
  seen[start] = 1;
  int reached = 1;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (NodeId w : instance.neighbors(v)) {
      if (mask[w] && !seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == members;
}

Subgame InducedSubgame(const GameInstance& instance,
                       const std::vector<NodeId>& coalition) {
  if (coalition.empty()) Structural("induced subgame of an empty coalition");
  const std::vector<NodeId> members =
      NormalizeCoalition(coalition, instance.num_nodes());
  const std::vector<char> mask = CoalitionMask(members, instance.num_nodes());
  if (!IsConnected(instance, mask)) {
    Structural("coalition does not induce a connected supply graph");
  }
  const int m = static_cast<int>(members.size());

  std::vector<std::vector<NodeId>> adj(instance.num_nodes() + 1);
  int num_edges = 0;
  for (const auto& [a, b] : instance.edges()) {
    if (mask[a] && mask[b]) {
      adj[a].push_back(b);
      adj[b].push_back(a);
      ++num_edges;
    }
  }

  // Choose the new numbering and the reclassified topology.
  std::vector<NodeId> order;
  Topology topology = Topology::General();
  bool path_shaped = true;
  if (num_edges != m - 1) path_shaped = false;
  for (NodeId v : members) {
    if (adj[v].size() > 2) path_shaped = false;
  }
  if (path_shaped) {
    topology = Topology::Path();
    NodeId end = members.front();
    for (NodeId v : members) {
      if (adj[v].size() <= 1) {
        end = v;
        break;
      }
    }
    NodeId prev = 0;
    NodeId cur = end;
    while (cur != 0) {
      order.push_back(cur);
      NodeId next = 0;
      for (NodeId w : adj[cur]) {
        if (w != prev) next = w;
      }
      prev = cur;
      cur = next;
    }
  } else {
    order = members;
    if (num_edges == m - 1) {
      NodeId hub = 0;
      int hubs = 0;
      for (NodeId v : members) {
        if (adj[v].size() > 2) {
          hub = v;
          ++hubs;
        }
      }
      if (hubs == 1) topology = Topology::Spider(hub);
    }
  }
  std::vector<NodeId> new_id(instance.num_nodes() + 1, 0);
  for (int i = 0; i < m; ++i) new_id[order[i]] = i + 1;
  if (topology.kind == TopologyKind::kSpider) topology.root = new_id[topology.root];

  std::vector<Edge> edges;
  if (!path_shaped) {
    for (const auto& [a, b] : instance.edges()) {
      if (mask[a] && mask[b]) edges.emplace_back(new_id[a], new_id[b]);
    }
  }
  std::vector<Capacity> caps;
  for (NodeId v : order) caps.push_back(instance.capacity(v));
  std::vector<Commodity> commodities;
  std::vector<std::pair<std::pair<NodeId, NodeId>, int>> keyed;
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    if (mask[c.u] && mask[c.v]) {
      NodeId a = new_id[c.u];
      NodeId b = new_id[c.v];
      commodities.push_back({a, b, c.demand});
      keyed.push_back({{std::min(a, b), std::max(a, b)}, k});
    }
  }
  Subgame sub;
  sub.instance = GameInstance::Create(m, topology, std::move(edges),
                                      std::move(caps), std::move(commodities));
  sub.original_node = order;
  std::sort(keyed.begin(), keyed.end());
  for (const auto& entry : keyed) sub.original_commodity.push_back(entry.second);
  return sub;
}

Capacity ResidualState::Bottleneck(const std::vector<NodeId>& path,
                                   NodeId* argmin) const {
  Capacity best = Capacity::Unbounded();
  for (NodeId v : path) {
    const Capacity& r = residual_[v];
    if (r.unbounded()) continue;
    if (best.unbounded() || r.value() < best.value()) {
      best = r;
      if (argmin != nullptr) *argmin = v;
    }
  }
  return best;
}

void ResidualState::Consume(const std::vector<NodeId>& path,
                            const Rational& amount) {
  for (NodeId v : path) residual_[v].Subtract(amount);
}

}  // namespace flowcore
