#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace kinctrl {

// Work is split into fixed-size blocks regardless of the worker count, and
// anything reduced across blocks is combined in block order.  That makes
// every result bit-identical between serial and threaded execution.
inline constexpr std::size_t parallel_block = 1024;

inline std::size_t block_count(std::size_t n) {
  return (n + parallel_block - 1) / parallel_block;
}

// fn(block_index, begin, end) must touch only state owned by its block.
template <class Fn>
void for_each_block(std::size_t n, unsigned threads, Fn&& fn) {
  const std::size_t nblocks = block_count(n);
  if (threads <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      fn(b, b * parallel_block, std::min(n, (b + 1) * parallel_block));
    }
    return;
  }
  const unsigned nw = static_cast<unsigned>(
      std::min<std::size_t>(threads, nblocks));
  std::vector<std::thread> pool;
  pool.reserve(nw);
  for (unsigned t = 0; t < nw; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t b = t; b < nblocks; b += nw) {
        fn(b, b * parallel_block, std::min(n, (b + 1) * parallel_block));
      }
    });
  }
  for (auto& th : pool) th.join();
}

// Deterministic floating-point sum: per-block partials, reduced in order.
template <class Get>
double blocked_sum(std::size_t n, unsigned threads, Get&& get) {
  std::vector<double> partial(block_count(n), 0.0);
  for_each_block(n, threads, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += get(i);
    partial[b] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

}  // namespace kinctrl
