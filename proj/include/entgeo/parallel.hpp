// Deterministic parallel sample loops.
//
// Work is split into blocks of a fixed size (independent of the worker
// count); per-block partials are merged in block order, so every result is
// invariant under the number of workers.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace entgeo {

inline constexpr std::uint64_t kSampleBlock = 1024;

/// Effective worker count: explicit request, else ENTGEO_WORKERS, else 1.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ENTGEO_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

/// Runs fn(first, last, partial) over item blocks [first, last) and returns
/// the per-block partials in block order.
template <typename Partial, typename BlockFn>
std::vector<Partial> run_blocks(std::uint64_t n_items, int workers, BlockFn&& fn,
                                std::uint64_t block_size = kSampleBlock) {
  if (block_size == 0) block_size = 1;
  const std::uint64_t n_blocks = (n_items + block_size - 1) / block_size;
  std::vector<Partial> partials(n_blocks);
  auto work_block = [&](std::uint64_t b) {
    const std::uint64_t first = b * block_size;
    const std::uint64_t last = std::min(n_items, first + block_size);
    fn(first, last, partials[b]);
  };

  const int w = std::min<std::uint64_t>(resolve_workers(workers), n_blocks ? n_blocks : 1);
  if (w <= 1) {
    for (std::uint64_t b = 0; b < n_blocks; ++b) work_block(b);
    return partials;
  }

  std::atomic<std::uint64_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      try {
        work_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(w));
  for (int i = 0; i < w; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
  return partials;
}

}  // namespace entgeo
