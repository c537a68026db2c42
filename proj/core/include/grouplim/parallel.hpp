#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace grouplim {

/// Worker count used by data-parallel loops. Defaults to GROUPLIM_THREADS
/// when set, otherwise hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Calls body(i) for every i in [0, n). Iterations must be independent.
template <class Body>
void parallel_for(std::size_t n, Body&& body, unsigned threads = thread_count()) {
  unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
}

/// Sum of term(i) over [0, n) with a reduction tree that depends only on n:
/// fixed-size blocks are summed left to right, then the block sums are
/// summed left to right. The result is bit-identical for any thread count.
template <class T, class Term>
T deterministic_sum(std::size_t n, Term&& term, T zero, bool parallel = true) {
  constexpr std::size_t kBlocks = 64;
  std::size_t block = std::max<std::size_t>(1, (n + kBlocks - 1) / kBlocks);
  std::size_t nblocks = (n + block - 1) / block;
  std::vector<T> partial(nblocks, zero);
  auto run = [&](std::size_t b) {
    T acc = zero;
    std::size_t hi = std::min(n, (b + 1) * block);
    for (std::size_t i = b * block; i < hi; ++i) acc += term(i);
    partial[b] = acc;
  };
  parallel_for(nblocks, run, parallel ? thread_count() : 1u);
  T total = zero;
  for (const T& p : partial) total += p;
  return total;
}

}  // namespace grouplim
