#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace parmc {

/// Resolves a requested thread count: values < 1 mean "all hardware threads".
inline unsigned resolve_threads(int requested) {
  if (requested >= 1) return static_cast<unsigned>(requested);
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Number of workers parallel_blocks will use for n items.
inline unsigned block_workers(std::size_t n, unsigned threads) {
  constexpr std::size_t kMinBlock = 2048;
  return static_cast<unsigned>(std::clamp<std::size_t>(n / kMinBlock, 1, std::max(1u, threads)));
}

/// Splits [0, n) into one contiguous block per worker and runs
/// fn(worker, begin, end) on each block. Blocks are a pure function of
/// (n, threads); callers keep results deterministic by writing only to
/// indices inside their block or to per-worker scratch.
template <class Fn>
void parallel_blocks(std::size_t n, unsigned threads, Fn&& fn) {
  unsigned workers = block_workers(n, threads);
  if (workers <= 1) {
    fn(0u, std::size_t{0}, n);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  auto run = [&](unsigned w) {
    std::size_t begin = n * w / workers;
    std::size_t end = n * (w + 1) / workers;
    try {
      fn(w, begin, end);
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
    }
  };
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// Calls fn(i) for every i in [0, n), possibly concurrently.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  parallel_blocks(n, threads, [&](unsigned, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) fn(i);
  });
}

/// Stable sort whose result is independent of the thread count: blocks are
/// stable-sorted concurrently, then merged pairwise with stable merges.
template <class It, class Less>
void parallel_stable_sort(It first, It last, unsigned threads, Less less) {
  const std::size_t n = static_cast<std::size_t>(last - first);
  const unsigned workers = block_workers(n / 8, threads);
  if (workers <= 1) {
    std::stable_sort(first, last, less);
    return;
  }
  std::vector<std::size_t> bounds(workers + 1);
  for (unsigned w = 0; w <= workers; ++w) bounds[w] = n * w / workers;
  parallel_for(workers, workers, [&](std::size_t w) {
    std::stable_sort(first + bounds[w], first + bounds[w + 1], less);
  });
  while (bounds.size() > 2) {
    std::vector<std::size_t> next;
    const std::size_t runs = bounds.size() - 1;
    for (std::size_t r = 0; r < runs; r += 2) {
      next.push_back(bounds[r]);
    }
    next.push_back(n);
    std::vector<std::size_t> pairs;
    for (std::size_t r = 0; r + 1 < runs; r += 2) pairs.push_back(r);
    // Each pair merges disjoint ranges.
    std::vector<std::thread> pool;
    for (std::size_t r : pairs) {
      pool.emplace_back([&, r] {
        std::inplace_merge(first + bounds[r], first + bounds[r + 1], first + bounds[r + 2], less);
      });
    }
    for (auto& t : pool) t.join();
    bounds = std::move(next);
  }
}

}  // namespace parmc
