#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace fracwalk {

// Worker count resolution: explicit argument > FRACWALK_THREADS > hardware.
int default_thread_count();
void set_default_thread_count(int n);

// Replica-parallel loop. fn(i) must only touch state owned by index i;
// results are then independent of scheduling and of the worker count.
template <class Fn>
void parallel_for(std::uint64_t count, Fn&& fn, int threads = 0) {
  if (threads <= 0) threads = default_thread_count();
  threads = int(std::min<std::uint64_t>(std::uint64_t(std::max(threads, 1)), count));
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::uint64_t chunk = std::max<std::uint64_t>(1, count / (16u * std::uint64_t(threads)));
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::uint64_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
      if (begin >= count) return;
      const std::uint64_t end = std::min(count, begin + chunk);
      for (std::uint64_t i = begin; i < end; ++i) fn(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(std::size_t(threads) - 1);
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

} // namespace fracwalk
