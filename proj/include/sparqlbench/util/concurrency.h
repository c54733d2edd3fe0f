// Copyright 2026 The sparqlbench Authors.
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

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace sparqlbench::util {

// Token bucket limiter. A rate of 0 disables limiting.
class TokenBucket {
 public:
  TokenBucket(double tokens_per_second, double burst);
  void acquire();

 private:
  using Clock = std::chrono::steady_clock;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
  std::mutex mu_;
};

// Runs fn(i) for i in [0, n) on up to `concurrency` threads. The first
// exception thrown by fn is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t concurrency,
                  const std::function<void(std::size_t)>& fn);

}  // namespace sparqlbench::util
