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

#include "flowcore/incorporate.h"

#include <algorithm>
#include <deque>
#include <functional>
#include <random>
#include <sstream>
#include <tuple>

#include "flowcore/error.h"

namespace flowcore {
namespace {

[[noreturn]] void InvalidOrder(const std::string& what) {
  throw Error(ErrorKind::kInvalidOrder, what);
}

void RequireTree(const GameInstance& instance) {
  if (!instance.has_unique_paths()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "incorporation needs a path or spider supply graph");
  }
}

std::vector<NodeId> AllowedStarts(const GameInstance& instance) {
  if (instance.is_spider()) return {instance.topology().root};
  std::vector<NodeId> starts;
  for (NodeId v = 1; v <= instance.num_nodes(); ++v) starts.push_back(v);
  return starts;
}

// Frontier bookkeeping for connected growth.
class Frontier {
 public:
  explicit Frontier(const GameInstance& instance)
      : instance_(instance), in_set_(instance.num_nodes() + 1, 0),
        on_frontier_(instance.num_nodes() + 1, 0) {}

  bool contains(NodeId v) const { return in_set_[v]; }
  bool on_frontier(NodeId v) const { return on_frontier_[v]; }
  const std::vector<NodeId>& nodes() const { return frontier_; }

  void Add(NodeId v) {
    in_set_[v] = 1;
    if (on_frontier_[v]) {
      on_frontier_[v] = 0;
      frontier_.erase(std::find(frontier_.begin(), frontier_.end(), v));
    }
    for (NodeId w : instance_.neighbors(v)) {
      if (!in_set_[w] && !on_frontier_[w]) {
        on_frontier_[w] = 1;
        frontier_.insert(std::lower_bound(frontier_.begin(), frontier_.end(), w),
                         w);
      }
    }
  }

  void Remove(NodeId v, const std::vector<NodeId>& restored_frontier) {
    in_set_[v] = 0;
    for (NodeId w : frontier_) on_frontier_[w] = 0;
    frontier_ = restored_frontier;
    for (NodeId w : frontier_) on_frontier_[w] = 1;
  }

 private:
  const GameInstance& instance_;
  std::vector<char> in_set_;
  std::vector<char> on_frontier_;
  std::vector<NodeId> frontier_;
};

std::vector<int> SubtreeSizes(const GameInstance& instance, NodeId root) {
  const int n = instance.num_nodes();
  std::vector<int> size(n + 1, 1);
  std::vector<NodeId> parent(n + 1, 0);
  std::vector<NodeId> order = {root};
  parent[root] = -1;
  for (size_t i = 0; i < order.size(); ++i) {
    for (NodeId w : instance.neighbors(order[i])) {
      if (parent[w] == 0) {
        parent[w] = order[i];
        order.push_back(w);
      }
    }
  }
  for (size_t i = order.size(); i-- > 1;) size[parent[order[i]]] += size[order[i]];
  return size;
}

}  // namespace

std::vector<NodeId> IncorporationOrder::Nodes() const {
  std::vector<NodeId> nodes = {start};
  nodes.insert(nodes.end(), sequence.begin(), sequence.end());
  return nodes;
}

std::string ToString(const IncorporationOrder& order) {
  std::ostringstream out;
  out << order.start << ";";
  for (size_t i = 0; i < order.sequence.size(); ++i) {
    out << (i ? "," : "") << order.sequence[i];
  }
  return out.str();
}

void ValidateOrder(const GameInstance& instance,
                   const IncorporationOrder& order) {
  const int n = instance.num_nodes();
  if (order.start < 1 || order.start > n) InvalidOrder("start node out of range");
  if (instance.is_spider() && order.start != instance.topology().root) {
    InvalidOrder("spider orders must start at the root " +
                 std::to_string(instance.topology().root));
  }
  if (static_cast<int>(order.sequence.size()) != n - 1) {
    InvalidOrder("order must list every node exactly once");
  }
  Frontier frontier(instance);
  frontier.Add(order.start);
  for (NodeId v : order.sequence) {
    if (v < 1 || v > n || frontier.contains(v)) {
      InvalidOrder("node " + std::to_string(v) + " repeated or out of range");
    }
    if (!frontier.on_frontier(v)) {
      InvalidOrder("node " + std::to_string(v) +
                   " is not adjacent to the incorporated set");
    }
    frontier.Add(v);
  }
}

RouteResult Route(const GameInstance& instance, int k, ResidualState& residual,
                  std::vector<Rational>& amounts) {
  RequireTree(instance);
  const auto& path = instance.CommodityPath(k);
  RouteResult result;
  result.increment = instance.commodity(k).demand - amounts[k];
  const Capacity bottleneck = residual.Bottleneck(path, &result.bottleneck);
  if (!bottleneck.unbounded() && bottleneck.value() < result.increment) {
    result.increment = bottleneck.value();
  }
  if (result.increment < 0) result.increment = 0;
  if (result.increment != 0) {
    residual.Consume(path, result.increment);
    amounts[k] += result.increment;
  }
  return result;
}

IncorporateResult Incorporate(const GameInstance& instance,
                              const IncorporationOrder& order) {
  RequireTree(instance);
  ValidateOrder(instance, order);
  const int n = instance.num_nodes();
  const std::vector<NodeId> nodes = order.Nodes();

  IncorporateResult result;
  result.trace.incorporation_time = NodeMap<int>(n, -1);
  ResidualState residual(instance);
  std::vector<Rational> amounts(instance.num_commodities(), Rational(0));
  std::vector<std::pair<int, int>> pending;  // (distance, other endpoint)

  for (int t = 0; t < n; ++t) {
    const NodeId v = nodes[t];
    result.trace.incorporation_time[v] = t;
    pending.clear();
    for (int k : instance.incident_commodities(v)) {
      const NodeId other = instance.commodity(k).Other(v);
      if (result.trace.incorporation_time[other] >= 0 && other != v) {
        pending.emplace_back(instance.TreeDistance(v, other), k);
      }
    }
    std::sort(pending.begin(), pending.end(), [&](const auto& a, const auto& b) {
      return std::tuple(a.first, instance.commodity(a.second).Other(v)) <
             std::tuple(b.first, instance.commodity(b.second).Other(v));
    });
    for (const auto& [distance, k] : pending) {
      RouteResult r = Route(instance, k, residual, amounts);
      result.trace.events.push_back(
          {static_cast<int>(result.trace.events.size()), t, k,
           std::move(r.increment), r.bottleneck});
    }
  }
  result.flow = Flow::FromAmounts(std::move(amounts));
  return result;
}

SpiderReduction ReduceSpider(const GameInstance& instance) {
  if (!instance.is_spider()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "spider reduction needs a spider instance");
  }
  const NodeId root = instance.topology().root;
  SpiderReduction out;
  std::vector<Commodity> kept;
  std::vector<std::tuple<int, int, NodeId, NodeId, int>> removed;
  for (int k = 0; k < instance.num_commodities(); ++k) {
    const Commodity& c = instance.commodity(k);
    const int lu = instance.LegOf(c.u);
    const int lv = instance.LegOf(c.v);
    if (c.u != root && c.v != root && lu != lv) {
      removed.emplace_back(std::min(lu, lv), std::max(lu, lv), c.u, c.v, k);
    } else {
      kept.push_back(c);
      out.kept.push_back(k);
    }
  }
  std::sort(removed.begin(), removed.end());
  for (const auto& entry : removed) out.removed.push_back(std::get<4>(entry));
  std::vector<Capacity> caps(instance.capacities().begin(),
                             instance.capacities().end());
  out.reduced = GameInstance::Create(instance.num_nodes(), instance.topology(),
                                     instance.edges(), std::move(caps),
                                     std::move(kept));
  return out;
}

IncorporateResult IncorporateSpider(
    const GameInstance& instance,
    const std::optional<IncorporationOrder>& order) {
  SpiderReduction reduction = ReduceSpider(instance);
  IncorporationOrder chosen;
  if (order.has_value()) {
    chosen = *order;
  } else {
    const NodeId root = instance.topology().root;
    chosen.start = root;
    std::vector<char> seen(instance.num_nodes() + 1, 0);
    std::deque<NodeId> queue = {root};
    seen[root] = 1;
    while (!queue.empty()) {
      NodeId v = queue.front();
      queue.pop_front();
      for (NodeId w : instance.neighbors(v)) {
        if (!seen[w]) {
          seen[w] = 1;
          chosen.sequence.push_back(w);
          queue.push_back(w);
        }
      }
    }
  }
  IncorporateResult inner = Incorporate(reduction.reduced, chosen);

  // Replay the reduced flow on the original instance, then add back the
  // removed commodities greedily.
  IncorporateResult result;
  result.trace.incorporation_time = inner.trace.incorporation_time;
  std::vector<Rational> amounts(instance.num_commodities(), Rational(0));
  ResidualState residual(instance);
  for (const RoutingEvent& e : inner.trace.events) {
    const int k = reduction.kept[e.commodity];
    amounts[k] += e.amount;
    residual.Consume(instance.CommodityPath(k), e.amount);
    RoutingEvent mapped = e;
    mapped.commodity = k;
    result.trace.events.push_back(std::move(mapped));
  }
  const int after = instance.num_nodes();
  for (int k : reduction.removed) {
    RouteResult r = Route(instance, k, residual, amounts);
    result.trace.events.push_back({static_cast<int>(result.trace.events.size()),
                                   after, k, std::move(r.increment),
                                   r.bottleneck});
  }
  result.flow = Flow::FromAmounts(std::move(amounts));
  return result;
}

IncorporateResult RunIncorporate(const GameInstance& instance,
                                 const IncorporationOrder& order) {
  if (instance.is_spider()) return IncorporateSpider(instance, order);
  return Incorporate(instance, order);
}

IncorporationOrder RandomValidOrder(const GameInstance& instance,
                                    std::uint64_t seed) {
  RequireTree(instance);
  std::mt19937_64 rng(seed);
  const std::vector<NodeId> starts = AllowedStarts(instance);
  IncorporationOrder order;
  order.start =
      starts[std::uniform_int_distribution<size_t>(0, starts.size() - 1)(rng)];
  Frontier frontier(instance);
  frontier.Add(order.start);
  while (!frontier.nodes().empty()) {
    const auto& f = frontier.nodes();
    NodeId next = f[std::uniform_int_distribution<size_t>(0, f.size() - 1)(rng)];
    order.sequence.push_back(next);
    frontier.Add(next);
  }
  return order;
}

mpz_class CountOrders(const GameInstance& instance) {
  RequireTree(instance);
  const int n = instance.num_nodes();
  mpz_class factorial = 1;
  for (int i = 2; i <= n; ++i) factorial *= i;
  mpz_class total = 0;
  for (NodeId root : AllowedStarts(instance)) {
    mpz_class denom = 1;
    const std::vector<int> size = SubtreeSizes(instance, root);
    for (NodeId v = 1; v <= n; ++v) denom *= size[v];
    total += factorial / denom;
  }
  return total;
}

std::vector<IncorporationOrder> EnumerateOrders(const GameInstance& instance,
                                                std::int64_t limit) {
  RequireTree(instance);
  if (CountOrders(instance) > limit) {
    throw Error(ErrorKind::kBudgetExceeded,
                "more than " + std::to_string(limit) + " incorporation orders");
  }
  std::vector<IncorporationOrder> out;
  for (NodeId start : AllowedStarts(instance)) {
    Frontier frontier(instance);
    frontier.Add(start);
    IncorporationOrder current{start, {}};
    std::function<void()> extend = [&] {
      if (frontier.nodes().empty()) {
        out.push_back(current);
        return;
      }
      const std::vector<NodeId> options = frontier.nodes();
      for (NodeId v : options) {
        current.sequence.push_back(v);
        frontier.Add(v);
        extend();
        frontier.Remove(v, options);
        current.sequence.pop_back();
      }
    };
    extend();
  }
  return out;
}

namespace {

// Strict containment of intervals on a path.
bool StrictlyInside(const Commodity& inner, const Commodity& outer) {
  return outer.u <= inner.u && inner.v <= outer.v &&
         (outer.u != inner.u || outer.v != inner.v);
}

void RequirePath(const GameInstance& instance) {
  if (!instance.is_path()) {
    throw Error(ErrorKind::kUnsupportedTopology,
                "nesting checks are defined on paths");
  }
}

}  // namespace

std::optional<NestingViolation> FindNestedDownViolation(
    const GameInstance& instance, const Flow& flow) {
  RequirePath(instance);
  for (int outer = 0; outer < instance.num_commodities(); ++outer) {
    if (flow.amount(outer) <= 0) continue;
    for (int inner = 0; inner < instance.num_commodities(); ++inner) {
      if (StrictlyInside(instance.commodity(inner), instance.commodity(outer)) &&
          flow.amount(inner) != instance.commodity(inner).demand) {
        return NestingViolation{outer, inner};
      }
    }
  }
  return std::nullopt;
}

std::optional<NestingViolation> FindNestedUpViolation(
    const GameInstance& instance, const Flow& flow) {
  RequirePath(instance);
  for (int inner = 0; inner < instance.num_commodities(); ++inner) {
    if (flow.amount(inner) >= instance.commodity(inner).demand) continue;
    for (int outer = 0; outer < instance.num_commodities(); ++outer) {
      if (StrictlyInside(instance.commodity(inner), instance.commodity(outer)) &&
          flow.amount(outer) != 0) {
        return NestingViolation{outer, inner};
      }
    }
  }
  return std::nullopt;
}

}  // namespace flowcore
