#pragma once

#include <algorithm>
#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace acfleet {

inline int resolve_jobs(int jobs) {
  if (jobs > 0) return jobs;
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

/// Runs fn(chunk_index, begin, end) over a fixed partition of [0, total) into
/// `chunks` contiguous ranges. The partition depends only on (total, chunks),
/// never on the worker count, so order-sensitive reductions done per chunk and
/// combined in chunk order give identical results for any `jobs` value.
inline void parallel_chunks(size_t total, int chunks, int jobs,
                            const std::function<void(int, size_t, size_t)>& fn) {
  if (total == 0) return;
  chunks = std::max(1, std::min<int>(chunks, static_cast<int>(total)));
  jobs = std::max(1, resolve_jobs(jobs));

  auto bounds = [&](int c) {
    size_t b = total * static_cast<size_t>(c) / chunks;
    size_t e = total * static_cast<size_t>(c + 1) / chunks;
    return std::pair<size_t, size_t>(b, e);
  };

  if (jobs == 1 || chunks == 1) {
    for (int c = 0; c < chunks; ++c) {
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
    return;
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      int c = next.fetch_add(1);
      if (c >= chunks) return;
      auto [b, e] = bounds(c);
      fn(c, b, e);
    }
  };
  std::vector<std::thread> pool;
  int nthreads = std::min(jobs, chunks);
  pool.reserve(static_cast<size_t>(nthreads) - 1);
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

/// Convenience: one item per chunk.
inline void parallel_for(size_t total, int jobs,
                         const std::function<void(size_t)>& fn) {
  parallel_chunks(total, static_cast<int>(total), jobs,
                  [&](int, size_t b, size_t e) {
                    for (size_t i = b; i < e; ++i) fn(i);
                  });
}

}  // namespace acfleet
