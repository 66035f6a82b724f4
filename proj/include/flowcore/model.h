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

#ifndef FLOWCORE_MODEL_H_
#define FLOWCORE_MODEL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flowcore/rational.h"

namespace flowcore {

// Players are the supply-graph nodes, numbered 1..n.
using NodeId = int;

// Dense per-node storage addressed by 1-based node ids.
template <typename T>
class NodeMap {
 public:
  NodeMap() = default;
  explicit NodeMap(int num_nodes, const T& init = T()) : values_(num_nodes, init) {}

  int size() const { return static_cast<int>(values_.size()); }
  T& operator[](NodeId v) { return values_[v - 1]; }
  const T& operator[](NodeId v) const { return values_[v - 1]; }

  auto begin() { return values_.begin(); }
  auto end() { return values_.end(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  friend bool operator==(const NodeMap& a, const NodeMap& b) {
    return a.values_ == b.values_;
  }

 private:
  std::vector<T> values_;
};

// A node capacity or residual: a nonnegative rational, or unbounded.
// Subtracting from an unbounded capacity leaves it unbounded.
class Capacity {
 public:
  Capacity() = default;  // zero
  explicit Capacity(Rational value) : value_(std::move(value)) {}
  static Capacity Unbounded() {
    Capacity c;
    c.unbounded_ = true;
    return c;
  }

  bool unbounded() const { return unbounded_; }
  // Precondition: !unbounded().
  const Rational& value() const;

  bool operator<(const Rational& x) const { return !unbounded_ && value_ < x; }
  bool operator==(const Capacity& other) const {
    return unbounded_ == other.unbounded_ && (unbounded_ || value_ == other.value_);
  }
  bool Equals(const Rational& x) const { return !unbounded_ && value_ == x; }

  void Subtract(const Rational& amount) {
    if (!unbounded_) value_ -= amount;
  }
  Capacity Scaled(const Rational& factor) const {
    return unbounded_ ? *this : Capacity(value_ * factor);
  }

 private:
  bool unbounded_ = false;
  Rational value_;
};

std::string ToString(const Capacity& c);

enum class TopologyKind { kPath, kSpider, kGeneral };

struct Topology {
  TopologyKind kind = TopologyKind::kPath;
  NodeId root = 0;  // spiders only

  static Topology Path() { return {TopologyKind::kPath, 0}; }
  static Topology Spider(NodeId root) { return {TopologyKind::kSpider, root}; }
  static Topology General() { return {TopologyKind::kGeneral, 0}; }
};

// A commodity edge uv of the demand graph; endpoints are stored with u < v.
struct Commodity {
  NodeId u = 0;
  NodeId v = 0;
  Rational demand;

  bool Touches(NodeId x) const { return x == u || x == v; }
  NodeId Other(NodeId x) const { return x == u ? v : u; }
};

using Edge = std::pair<NodeId, NodeId>;

// The game (G, c, H, d). Immutable after construction. Path and spider
// topologies are trees, so every commodity has a unique routing path, which
// is precomputed.
class GameInstance {
 public:
  GameInstance() = default;

  // Validates every invariant; throws Error(kStructural) on violation.
  // For path topology `edges` may be empty (the path 1-2-...-n is implied).
  static GameInstance Create(int num_nodes, Topology topology,
                             std::vector<Edge> edges,
                             std::vector<Capacity> capacity,
                             std::vector<Commodity> commodities);

  static GameInstance MakePath(std::vector<Capacity> capacity,
                               std::vector<Commodity> commodities);

  int num_nodes() const { return num_nodes_; }
  const Topology& topology() const { return topology_; }
  bool is_path() const { return topology_.kind == TopologyKind::kPath; }
  bool is_spider() const { return topology_.kind == TopologyKind::kSpider; }
  bool has_unique_paths() const {
    return topology_.kind != TopologyKind::kGeneral;
  }

  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& neighbors(NodeId v) const { return adjacency_[v]; }
  bool Adjacent(NodeId a, NodeId b) const;

  const Capacity& capacity(NodeId v) const { return capacity_[v]; }
  const NodeMap<Capacity>& capacities() const { return capacity_; }

  int num_commodities() const { return static_cast<int>(commodities_.size()); }
  const Commodity& commodity(int k) const { return commodities_[k]; }
  const std::vector<Commodity>& commodities() const { return commodities_; }
  std::optional<int> FindCommodity(NodeId a, NodeId b) const;
  const std::vector<int>& incident_commodities(NodeId v) const {
    return incident_[v];
  }

  // Unique routing path of commodity k, from u to v. Tree topologies only.
  const std::vector<NodeId>& CommodityPath(int k) const;

  // Tree topologies only.
  std::vector<NodeId> TreePath(NodeId a, NodeId b) const;
  int TreeDistance(NodeId a, NodeId b) const;

  // Spider legs, numbered 1.. in order of the root's neighbours; the root is
  // on leg 0. Spider topology only.
  int num_legs() const { return num_legs_; }
  int LegOf(NodeId v) const { return leg_[v]; }

  // Nodes incident to at least one positive-demand commodity.
  std::vector<NodeId> DemandIncidentNodes() const;

 private:
  void BuildTreeIndex();

  int num_nodes_ = 0;
  Topology topology_;
  std::vector<Edge> edges_;
  std::vector<std::vector<NodeId>> adjacency_;  // index 0 unused
  NodeMap<Capacity> capacity_;
  std::vector<Commodity> commodities_;
  std::vector<std::vector<int>> incident_;  // index 0 unused

  // Tree index, rooted at topology root (spider) or node 1.
  std::vector<NodeId> parent_;
  std::vector<int> depth_;
  std::vector<int> leg_;
  int num_legs_ = 0;
  std::vector<std::vector<NodeId>> commodity_paths_;
};

struct PathFlow {
  int commodity = 0;
  std::vector<NodeId> nodes;  // from one endpoint to the other
  Rational amount;
};

// A multicommodity flow. In unique-path mode (mandatory for path and spider
// topologies) only per-commodity amounts are stored; in path mode each
// positive path is explicit. totals() is available in both modes.
class Flow {
 public:
  Flow() = default;

  static Flow Zero(const GameInstance& instance);
  static Flow FromAmounts(std::vector<Rational> amounts);
  static Flow FromPaths(int num_commodities, std::vector<PathFlow> paths);
  // Unique-path mode when the instance has unique paths, else path mode.
  static Flow FromPathsFor(const GameInstance& instance,
                           std::vector<PathFlow> paths);

  bool unique_path_mode() const { return unique_path_mode_; }
  int num_commodities() const { return static_cast<int>(totals_.size()); }
  const std::vector<Rational>& totals() const { return totals_; }
  const Rational& amount(int k) const { return totals_[k]; }
  const std::vector<PathFlow>& paths() const { return paths_; }

  // Every path with positive flow, resolved against the instance.
  std::vector<PathFlow> PositivePaths(const GameInstance& instance) const;

  // Throws Error(kStructural) when the flow does not fit the instance.
  void Validate(const GameInstance& instance) const;

  Flow Plus(const Flow& other) const;
  Flow Scaled(const Rational& factor) const;

  friend bool operator==(const Flow& a, const Flow& b);

 private:
  bool unique_path_mode_ = true;
  std::vector<Rational> totals_;
  std::vector<PathFlow> paths_;
};

using PayoffVector = NodeMap<Rational>;

// pi_v = sum of flow on commodities terminating at v.
PayoffVector Payoff(const GameInstance& instance, const Flow& flow);

// Total flow touching each node (terminating or transiting).
NodeMap<Rational> NodeUsage(const GameInstance& instance, const Flow& flow);

Rational SocialWelfare(const PayoffVector& payoff);
// Minimum payoff over `eligible`; zero for an empty set.
Rational Fairness(const PayoffVector& payoff, const std::vector<NodeId>& eligible);

struct Violation {
  enum class Kind { kNegative, kCapacity, kDemand };
  Kind kind;
  NodeId node = 0;     // capacity violations
  int commodity = -1;  // demand / negativity violations
  Rational load;
  Rational bound;
  std::string Describe() const;
};

struct FeasibilityReport {
  bool feasible = true;
  std::optional<Violation> first_violation;
};

FeasibilityReport CheckFeasibility(const GameInstance& instance,
                                   const Flow& flow);
inline bool IsFeasible(const GameInstance& instance, const Flow& flow) {
  return CheckFeasibility(instance, flow).feasible;
}

// G[S] and H[S] as a standalone game, nodes renumbered 1..|S|. On paths and
// path-shaped induced subgraphs nodes are renumbered along the path.
struct Subgame {
  GameInstance instance;
  std::vector<NodeId> original_node;    // new id - 1 -> original id
  std::vector<int> original_commodity;  // new index -> original index
};

Subgame InducedSubgame(const GameInstance& instance,
                       const std::vector<NodeId>& coalition);

// Residual capacities C_v during a routing run.
class ResidualState {
 public:
  explicit ResidualState(const GameInstance& instance)
      : residual_(instance.capacities()) {}

  const Capacity& operator[](NodeId v) const { return residual_[v]; }
  // Smallest residual on the path; unbounded if every node is unbounded.
  Capacity Bottleneck(const std::vector<NodeId>& path,
                      NodeId* argmin = nullptr) const;
  void Consume(const std::vector<NodeId>& path, const Rational& amount);

 private:
  NodeMap<Capacity> residual_;
};

// Sorted node set helpers; coalitions are kept sorted and duplicate free.
std::vector<NodeId> NormalizeCoalition(std::vector<NodeId> nodes, int num_nodes);
std::vector<char> CoalitionMask(const std::vector<NodeId>& coalition,
                                int num_nodes);
bool IsConnected(const GameInstance& instance, const std::vector<char>& mask);

}  // namespace flowcore

#endif  // FLOWCORE_MODEL_H_
