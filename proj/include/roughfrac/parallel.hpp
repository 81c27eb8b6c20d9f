// Copyright 2026 The roughfrac Authors.
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
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace roughfrac::detail {

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count) on contiguous chunks. Each index is handled
/// by exactly one worker, so positional outputs do not depend on the worker
/// count. If any call throws, the exception from the smallest failing index is
/// rethrown after all workers finish.
template <class Body>
void parallel_for(std::size_t count, int workers, Body&& body) {
  const std::size_t nw = std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(workers)),
                                               std::max<std::size_t>(count, 1));
  std::vector<std::exception_ptr> errors(nw);
  auto run = [&](std::size_t w) {
    const std::size_t lo = count * w / nw, hi = count * (w + 1) / nw;
    for (std::size_t i = lo; i < hi; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[w] = std::current_exception();
        return;
      }
    }
  };
  if (nw == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < nw; ++w) pool.emplace_back(run, w);
  }
  for (std::size_t w = 0; w < nw; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace roughfrac::detail
