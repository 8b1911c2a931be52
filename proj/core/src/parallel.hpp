#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace sqf::detail {

// Splits [0, n) into one contiguous block per thread. Callers write only to
// slots inside their own block.
template <typename Fn>
void parallel_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = std::min(n, t * chunk);
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
}

}  // namespace sqf::detail
