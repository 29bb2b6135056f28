#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace preciseum {

/// Worker-thread budget for operations that partition their output.
/// Results never depend on `threads`: work is split over independent output
/// elements, each of which is computed in a fixed order.
struct Parallelism {
  unsigned threads = 1;
};

namespace detail {

/// Run fn(begin, end) over [0, n) split into contiguous chunks.
template <class Fn>
void parallel_for(std::size_t n, Parallelism par, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, par.threads), n);
  if (workers <= 1) {
    if (n != 0) fn(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 1; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  fn(std::size_t{0}, std::min(n, chunk));
}

}  // namespace detail
}  // namespace preciseum
