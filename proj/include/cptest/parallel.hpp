#pragma once
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cptest {

inline int default_threads() {
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(i) for i in [0, count). Callers keep each index a pure function
/// of the index (own RNG substream, own output slot), so the result is
/// identical for any worker count. threads <= 1 runs inline.
template <class Fn>
void parallel_for(std::int64_t count, int threads, Fn&& body) {
  if (count <= 0) return;
  std::int64_t workers = std::min<std::int64_t>(std::max(threads, 1), count);
  if (workers == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  constexpr std::int64_t kGrain = 16;
  auto work = [&] {
    for (;;) {
      std::int64_t begin = next.fetch_add(kGrain, std::memory_order_relaxed);
      if (begin >= count) return;
      std::int64_t end = std::min(begin + kGrain, count);
      try {
        for (std::int64_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::int64_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace cptest
