#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace rovella {

/// Worker count used by Monte Carlo kernels. Results never depend on it:
/// work is split into fixed chunks and per-chunk results are combined in chunk order.
struct Execution {
  int workers = 1;
};

inline constexpr std::size_t kDefaultChunk = 256;

/// Calls fn(chunk_index, begin, end) for consecutive chunks of [0, n_items).
/// If several chunks throw, the exception from the lowest chunk index wins.
template <class Fn>
void for_each_chunk(std::size_t n_items, std::size_t chunk, const Execution& exec, Fn&& fn) {
  if (n_items == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t n_chunks = (n_items + chunk - 1) / chunk;
  const auto workers = static_cast<std::size_t>(std::max(1, exec.workers));

  if (workers == 1 || n_chunks == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) fn(c, c * chunk, std::min(n_items, (c + 1) * chunk));
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr err;
  std::size_t err_chunk = n_chunks;
  auto body = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        fn(c, c * chunk, std::min(n_items, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (c < err_chunk) {
          err_chunk = c;
          err = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(workers, n_chunks);
  pool.reserve(spawn - 1);
  for (std::size_t w = 1; w < spawn; ++w) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::uint64_t splitmix64(std::uint64_t x);

/// Independent random stream for sample `index` of a run seeded with `seed`.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index);

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform on [-1, 1).
  double uniform_symmetric() { return 2.0 * uniform01() - 1.0; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace rovella
