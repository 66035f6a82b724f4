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

#ifndef FLOWCORE_PARALLEL_H_
#define FLOWCORE_PARALLEL_H_

#include <cstdint>
#include <functional>
#include <optional>

namespace flowcore {

// FLOWCORE_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
int DefaultThreads();

// The smallest i in [0, count) with pred(i), evaluated on `threads` workers.
// Indices above the best hit found so far are skipped, so the result does not
// depend on scheduling. Exceptions from pred are rethrown.
std::optional<std::int64_t> ParallelFindFirst(
    std::int64_t count, int threads,
    const std::function<bool(std::int64_t)>& pred);

// Runs body(i) for every i in [0, count) on `threads` workers.
void ParallelFor(std::int64_t count, int threads,
                 const std::function<void(std::int64_t)>& body);

}  // namespace flowcore

#endif  // FLOWCORE_PARALLEL_H_
