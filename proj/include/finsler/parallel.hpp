#pragma once

// Static-partition parallel map. Results must be written to preassigned
// slots; reductions happen sequentially afterwards so that outcomes do not
// depend on the thread count.

#include <algorithm>
#include <thread>
#include <vector>

namespace finsler {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

template <class Fn>
void parallel_for(size_t count, int threads, Fn&& body) {
  threads = resolve_threads(threads);
  if (threads <= 1 || count < 2) {
    body(size_t{0}, count);
    return;
  }
  size_t nchunks = std::min<size_t>(static_cast<size_t>(threads), count);
  size_t chunk = (count + nchunks - 1) / nchunks;
  std::vector<std::thread> pool;
  pool.reserve(nchunks);
  for (size_t t = 0; t < nchunks; ++t) {
    size_t lo = t * chunk;
    size_t hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([=, &body] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace finsler
