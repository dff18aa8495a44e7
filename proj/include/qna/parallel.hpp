#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace qna {

// Runs fn(begin, end) over a partition of [0, n). Each worker owns a disjoint
// index range, so results are bitwise identical for any thread count as long
// as fn writes only to slots in its range. Reductions must be done by storing
// per-index partials and summing them sequentially afterwards.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (n == 0) return;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  std::size_t t = threads <= 0 ? hw : static_cast<std::size_t>(threads);
  t = std::min(t, n);
  if (t <= 1) {
    fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(t);
  const std::size_t chunk = (n + t - 1) / t;
  for (std::size_t w = 0; w < t; ++w) {
    const std::size_t b = w * chunk;
    const std::size_t e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qna
