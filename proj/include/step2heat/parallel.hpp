#pragma once

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace step2heat {

/// Worker cap: STEP2HEAT_THREADS if set, otherwise hardware concurrency.
inline int max_workers() {
  if (const char* env = std::getenv("STEP2HEAT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(worker_id, begin, end) over a block partition of [0, n).
/// Each worker owns a contiguous index range so per-worker state
/// (evaluation contexts, RNG substreams) never crosses threads.
inline void parallel_for_blocks(
    std::size_t n, const std::function<void(int, std::size_t, std::size_t)>& fn,
    int workers = 0) {
  if (workers <= 0) workers = max_workers();
  workers = static_cast<int>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
  if (workers <= 1 || n <= 1) {
    fn(0, 0, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    std::size_t b = std::min(n, w * chunk);
    std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back(fn, w, b, e);
  }
  for (auto& th : pool) th.join();
}

}  // namespace step2heat
