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

#ifndef FLOWCORE_VERIFY_H_
#define FLOWCORE_VERIFY_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "flowcore/model.h"

namespace flowcore {

struct Breakaway {
  std::vector<NodeId> coalition;
  Flow flow;  // the deviation, on the full instance
  Rational margin;
};

struct CoreVerdict {
  bool in_core = false;
  std::optional<Breakaway> breakaway;
  std::int64_t coalitions_checked = 0;
};

struct VerifyOptions {
  int threads = 0;  // 0: DefaultThreads()
  std::int64_t max_coalitions = 2000000;
  // Skip the deviation LP for coalitions with a player whose target already
  // covers its capacity or its S-internal demand.
  bool prefilter = true;
};

// The coalitions examined for `instance`: intervals on paths, connected
// subsets otherwise (general graphs need n <= 12), excluding the grand
// coalition. Ordered by size, then lexicographically. Throws
// Error(kBudgetExceeded) past `max_coalitions`.
std::vector<std::vector<NodeId>> CandidateCoalitions(const GameInstance& instance,
                                                     std::int64_t max_coalitions);

// Core membership of the payoff of a feasible flow. The returned breakaway is
// the first one in CandidateCoalitions order.
CoreVerdict VerifyCore(const GameInstance& instance, const Flow& flow,
                       const VerifyOptions& options = {});
CoreVerdict VerifyCore(const GameInstance& instance, const PayoffVector& payoff,
                       const VerifyOptions& options = {});

// Membership in the approximate core: no coalition strictly improves on
// factor * payoff. Throws Error(kStructural) for factor < 1.
CoreVerdict VerifyApproxCore(const GameInstance& instance, const Flow& flow,
                             const Rational& factor,
                             const VerifyOptions& options = {});
CoreVerdict VerifyApproxCore(const GameInstance& instance,
                             const PayoffVector& payoff, const Rational& factor,
                             const VerifyOptions& options = {});

// Capacities and demands multiplied by factor in (0, 1].
GameInstance ScaleInstance(const GameInstance& instance, const Rational& factor);

}  // namespace flowcore

#endif  // FLOWCORE_VERIFY_H_
