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

#include "flowcore/verify.h"

#include <algorithm>
#include <functional>

#include "flowcore/certificate.h"
#include "flowcore/error.h"
#include "flowcore/game_lp.h"
#include "flowcore/parallel.h"

namespace flowcore {
namespace {

constexpr int kMaxGeneralNodes = 12;

void CountOne(std::int64_t& count, std::int64_t budget) {
  if (++count > budget) {
    throw Error(ErrorKind::kBudgetExceeded,
                "more than " + std::to_string(budget) + " coalitions");
  }
}

// Each connected set is produced once, from its smallest node.
void ConnectedSubsets(const GameInstance& instance, std::int64_t budget,
                      std::vector<std::vector<NodeId>>& out) {
  const int n = instance.num_nodes();
  std::int64_t count = 0;
  std::vector<char> in_set(n + 1, 0);
  std::vector<char> blocked(n + 1, 0);
  std::vector<NodeId> current;
  std::function<void(NodeId, std::vector<NodeId>)> grow =
      [&](NodeId root, std::vector<NodeId> extension) {
        if (static_cast<int>(current.size()) < n) {
          CountOne(count, budget);
          std::vector<NodeId> sorted = current;
          std::sort(sorted.begin(), sorted.end());
          out.push_back(std::move(sorted));
        }
        std::vector<NodeId> newly_blocked;
        while (!extension.empty()) {
          const NodeId u = extension.back();
          extension.pop_back();
          std::vector<NodeId> next = extension;
          in_set[u] = 1;
          current.push_back(u);
          for (NodeId x : instance.neighbors(u)) {
            if (x > root && !in_set[x] && !blocked[x] &&
                std::find(next.begin(), next.end(), x) == next.end()) {
              next.push_back(x);
            }
          }
          grow(root, std::move(next));
          current.pop_back();
          in_set[u] = 0;
          blocked[u] = 1;
          newly_blocked.push_back(u);
        }
        for (NodeId u : newly_blocked) blocked[u] = 0;
      };
  for (NodeId root = 1; root <= n; ++root) {
    in_set[root] = 1;
    current = {root};
    std::vector<NodeId> extension;
    for (NodeId x : instance.neighbors(root)) {
      if (x > root) extension.push_back(x);
    }
    grow(root, std::move(extension));
    in_set[root] = 0;
  }
}

// A binary certificate from a single player, when one exists.
bool TrivialCertificate(const GameInstance& instance, const PayoffVector& target,
                        const std::vector<NodeId>& coalition) {
  const std::vector<char> mask = CoalitionMask(coalition, instance.num_nodes());
  for (NodeId v : coalition) {
    const Capacity& c = instance.capacity(v);
    if (!c.unbounded() && target[v] >= c.value()) return true;
    Rational internal = 0;
    for (int k : instance.incident_commodities(v)) {
      const Commodity& com = instance.commodity(k);
      if (mask[com.u] && mask[com.v]) internal += com.demand;
    }
    if (target[v] >= internal) return true;
  }
  return false;
}

CoreVerdict Search(const GameInstance& instance, const PayoffVector& target,
                   const VerifyOptions& options) {
  if (target.size() != instance.num_nodes()) {
    throw Error(ErrorKind::kStructural, "payoff vector size mismatch");
  }
  const std::vector<std::vector<NodeId>> coalitions =
      CandidateCoalitions(instance, options.max_coalitions);
  const int threads = options.threads > 0 ? options.threads : DefaultThreads();
  std::vector<std::optional<DeviationResult>> results(coalitions.size());
  const auto first = ParallelFindFirst(
      static_cast<std::int64_t>(coalitions.size()), threads,
      [&](std::int64_t i) {
        if (options.prefilter && TrivialCertificate(instance, target, coalitions[i])) {
          return false;
        }
        DeviationResult r = DeviationMargin(instance, target, coalitions[i]);
        const bool found = r.margin > 0;
        if (found) results[i] = std::move(r);
        return found;
      });
  CoreVerdict verdict;
  if (first) {
    const DeviationResult& r = *results[*first];
    verdict.breakaway = Breakaway{coalitions[*first], r.witness, r.margin};
    verdict.coalitions_checked = *first + 1;
  } else {
    verdict.in_core = true;
    verdict.coalitions_checked = static_cast<std::int64_t>(coalitions.size());
  }
  return verdict;
}

PayoffVector FeasiblePayoff(const GameInstance& instance, const Flow& flow) {
  const FeasibilityReport report = CheckFeasibility(instance, flow);
  if (!report.feasible) {
    throw Error(ErrorKind::kStructural,
                "infeasible flow: " + report.first_violation->Describe());
  }
  return Payoff(instance, flow);
}

}  // namespace

std::vector<std::vector<NodeId>> CandidateCoalitions(const GameInstance& instance,
                                                     std::int64_t max_coalitions) {
  const int n = instance.num_nodes();
  std::vector<std::vector<NodeId>> out;
  if (instance.is_path()) {
    std::int64_t count = 0;
    for (int size = 1; size < n; ++size) {
      for (NodeId i = 1; i + size - 1 <= n; ++i) {
        CountOne(count, max_coalitions);
        std::vector<NodeId> s(size);
        for (int t = 0; t < size; ++t) s[t] = i + t;
        out.push_back(std::move(s));
      }
    }
    return out;
  }
  if (!instance.is_spider() && n > kMaxGeneralNodes) {
    throw Error(ErrorKind::kBudgetExceeded,
                "core verification on general graphs needs n <= " +
                    std::to_string(kMaxGeneralNodes));
  }
  ConnectedSubsets(instance, max_coalitions, out);
  std::sort(out.begin(), out.end(),
            [](const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
              return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
  return out;
}

CoreVerdict VerifyCore(const GameInstance& instance, const Flow& flow,
                       const VerifyOptions& options) {
  return Search(instance, FeasiblePayoff(instance, flow), options);
}

CoreVerdict VerifyCore(const GameInstance& instance, const PayoffVector& payoff,
                       const VerifyOptions& options) {
  return Search(instance, payoff, options);
}

CoreVerdict VerifyApproxCore(const GameInstance& instance, const Flow& flow,
                             const Rational& factor, const VerifyOptions& options) {
  return VerifyApproxCore(instance, FeasiblePayoff(instance, flow), factor, options);
}

CoreVerdict VerifyApproxCore(const GameInstance& instance,
                             const PayoffVector& payoff, const Rational& factor,
                             const VerifyOptions& options) {
  if (factor < 1) {
    throw Error(ErrorKind::kStructural, "approximation factor must be at least 1");
  }
  PayoffVector target = payoff;
  for (Rational& x : target) x *= factor;
  return Search(instance, target, options);
}

GameInstance ScaleInstance(const GameInstance& instance, const Rational& factor) {
  if (factor <= 0 || factor > 1) {
    throw Error(ErrorKind::kStructural, "scale factor must lie in (0, 1]");
  }
  std::vector<Capacity> capacity;
  for (const Capacity& c : instance.capacities()) capacity.push_back(c.Scaled(factor));
  std::vector<Commodity> commodities = instance.commodities();
  for (Commodity& c : commodities) c.demand *= factor;
  return GameInstance::Create(instance.num_nodes(), instance.topology(),
                              instance.edges(), std::move(capacity),
                              std::move(commodities));
}

}  // namespace flowcore
