#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace eaqc {

// Runs fn(i) for i in [0, n) on up to `threads` workers.  Callers own any
// result aggregation; writing fn(i) results into a preallocated slot i keeps
// the outcome independent of scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      fn(i);
    }
  };
  int nw = std::min(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (int w = 0; w < nw; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace eaqc
