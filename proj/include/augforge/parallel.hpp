// Copyright 2026 The Augforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace augforge {

// Runs fn(i) for i in [0, n) on up to `workers` threads, pulling indices
// from a shared counter. The first exception stops new work and is rethrown
// on the calling thread after all workers join.
inline void parallel_for(size_t n, int workers,
                         const std::function<void(size_t)>& fn) {
  if (n == 0) return;
  size_t n_threads = std::min(static_cast<size_t>(std::max(workers, 1)), n);
  if (n_threads == 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto body = [&] {
    for (;;) {
      if (stop.load(std::memory_order_relaxed)) return;
      size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace augforge
