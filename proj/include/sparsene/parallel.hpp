#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace sparsene {

// Run fn(worker, begin, end) on `threads` workers over [0, total), each
// worker owning one contiguous chunk. Chunking depends only on (total,
// threads), so any algorithm whose per-worker output is merged in worker
// order is reproducible for a fixed thread count.
template <typename Fn>
void parallel_chunks(std::uint64_t total, std::uint32_t threads, Fn&& fn) {
  if (threads <= 1 || total == 0) {
    fn(0u, std::uint64_t{0}, total);
    return;
  }
  if (threads > total) threads = static_cast<std::uint32_t>(total);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const std::uint64_t base = total / threads;
  const std::uint64_t extra = total % threads;
  std::uint64_t begin = 0;
  for (std::uint32_t w = 0; w < threads; ++w) {
    const std::uint64_t len = base + (w < extra ? 1 : 0);
    pool.emplace_back(fn, w, begin, begin + len);
    begin += len;
  }
  for (auto& t : pool) t.join();
}

// Parallel loop over rows where each iteration writes only its own output
// slot: results are identical for every thread count.
template <typename Fn>
void parallel_for(std::uint64_t total, std::uint32_t threads, Fn&& fn) {
  parallel_chunks(total, threads,
                  [&](std::uint32_t, std::uint64_t begin, std::uint64_t end) {
                    for (std::uint64_t i = begin; i < end; ++i) fn(i);
                  });
}

}  // namespace sparsene
