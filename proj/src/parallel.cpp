#include "fracwalk/parallel.hpp"

#include <cstdlib>

namespace fracwalk {

namespace {

int resolve_initial() {
  if (const char* env = std::getenv("FRACWALK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

std::atomic<int> g_threads{0};

} // namespace

int default_thread_count() {
  int n = g_threads.load(std::memory_order_relaxed);
  if (n == 0) {
    n = resolve_initial();
    g_threads.store(n, std::memory_order_relaxed);
  }
  return n;
}

void set_default_thread_count(int n) {
  g_threads.store(n > 0 ? n : resolve_initial(), std::memory_order_relaxed);
}

} // namespace fracwalk
