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

#include "flowcore/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace flowcore {

int DefaultThreads() {
  if (const char* env = std::getenv("FLOWCORE_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return value;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

void RunWorkers(std::int64_t count, int threads,
                const std::function<bool(std::int64_t)>& step) {
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    try {
      for (std::int64_t i = next++; i < count; i = next++) {
        if (!step(i)) return;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next = count;
    }
  };
  const int n = static_cast<int>(
      std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::optional<std::int64_t> ParallelFindFirst(
    std::int64_t count, int threads,
    const std::function<bool(std::int64_t)>& pred) {
  std::atomic<std::int64_t> best{count};
  RunWorkers(count, threads, [&](std::int64_t i) {
    if (i >= best.load()) return false;
    if (pred(i)) {
      std::int64_t current = best.load();
      while (i < current && !best.compare_exchange_weak(current, i)) {
      }
    }
    return true;
  });
  if (best.load() == count) return std::nullopt;
  return best.load();
}

void ParallelFor(std::int64_t count, int threads,
                 const std::function<void(std::int64_t)>& body) {
  RunWorkers(count, threads, [&](std::int64_t i) {
    body(i);
    return true;
  });
}

}  // namespace flowcore
