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

#ifndef FLOWCORE_INCORPORATE_H_
#define FLOWCORE_INCORPORATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "flowcore/model.h"

namespace flowcore {

// The order in which INCORPORATE grows the coalition: `start` first, then
// `sequence`; every prefix must induce a connected subgraph.
struct IncorporationOrder {
  NodeId start = 0;
  std::vector<NodeId> sequence;

  std::vector<NodeId> Nodes() const;  // start followed by sequence
  friend bool operator==(const IncorporationOrder&,
                         const IncorporationOrder&) = default;
  friend auto operator<=>(const IncorporationOrder&,
                          const IncorporationOrder&) = default;
};

std::string ToString(const IncorporationOrder& order);

// Throws Error(kInvalidOrder) unless the order covers every node exactly
// once, grows connectedly, and (on spiders) starts at the root.
void ValidateOrder(const GameInstance& instance, const IncorporationOrder& order);

struct RouteResult {
  Rational increment;
  NodeId bottleneck = 0;  // 0 when every path node is unbounded
};

// ROUTE: pushes min(remaining demand, smallest residual) along the unique
// path of commodity k and charges every node on it.
RouteResult Route(const GameInstance& instance, int k, ResidualState& residual,
                  std::vector<Rational>& amounts);

struct RoutingEvent {
  int step = 0;                // 0-based event index
  int incorporation_step = 0;  // index into Nodes() of the node being added
  int commodity = 0;
  Rational amount;
  NodeId bottleneck = 0;
};

struct RoutingTrace {
  std::vector<RoutingEvent> events;
  // Index into Nodes() at which each node was incorporated.
  NodeMap<int> incorporation_time;

  // First incorporation step after which both a and b are incorporated.
  int ProcessingTime(NodeId a, NodeId b) const {
    return std::max(incorporation_time[a], incorporation_time[b]);
  }
};

struct IncorporateResult {
  Flow flow;
  RoutingTrace trace;
};

// INCORPORATE on a tree instance. When node v joins, every commodity kv with
// k already incorporated is routed, closest k first (ties by node id).
// Spider inputs are taken as given; use IncorporateSpider for the reduction.
IncorporateResult Incorporate(const GameInstance& instance,
                              const IncorporationOrder& order);

struct SpiderReduction {
  GameInstance reduced;           // same nodes, inter-leg commodities dropped
  std::vector<int> kept;          // reduced index -> original index
  std::vector<int> removed;       // original indices, post-hoc routing order
};

// Drops every commodity whose endpoints are both non-root and on different
// legs. Removed commodities are ordered by (smaller leg, larger leg, u, v).
SpiderReduction ReduceSpider(const GameInstance& instance);

// Reduce, incorporate from the root, then greedily route the removed
// commodities. The flow and trace refer to the original instance. Without an
// order, the breadth-first order from the root is used.
IncorporateResult IncorporateSpider(
    const GameInstance& instance,
    const std::optional<IncorporationOrder>& order = std::nullopt);

// Dispatches on topology: paths run Incorporate, spiders IncorporateSpider.
IncorporateResult RunIncorporate(const GameInstance& instance,
                                 const IncorporationOrder& order);

// Start uniform over the allowed starts (any node on a path, the root on a
// spider), then each next node uniform over the sorted frontier.
IncorporationOrder RandomValidOrder(const GameInstance& instance,
                                    std::uint64_t seed);

// The number of valid orders: for each allowed start r, n!/prod of subtree
// sizes of the tree rooted at r. A path has 2^(n-1).
mpz_class CountOrders(const GameInstance& instance);

// All valid orders in lexicographic order of Nodes(). Throws
// Error(kBudgetExceeded) when there are more than `limit`.
std::vector<IncorporationOrder> EnumerateOrders(const GameInstance& instance,
                                                std::int64_t limit);

// Nested-flow structure on a path, given commodity indices (outer, inner)
// with [inner] strictly inside [outer] that break the property.
struct NestingViolation {
  int outer = 0;
  int inner = 0;
};
// f_outer > 0 but f_inner < d_inner.
std::optional<NestingViolation> FindNestedDownViolation(
    const GameInstance& instance, const Flow& flow);
// The same property scanned from the under-routed inner commodity.
std::optional<NestingViolation> FindNestedUpViolation(
    const GameInstance& instance, const Flow& flow);

}  // namespace flowcore

#endif  // FLOWCORE_INCORPORATE_H_
