#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace cloudcomp {

/// How many contiguous index ranges a pixel-wise operation is split into.
/// Every operation produces identical output for any worker count.
struct Partition {
  std::size_t workers = 1;
};

/// Calls `fn(begin, end)` over [0, count) split into at most `p.workers`
/// contiguous chunks, each on its own thread. Chunk k always covers the
/// same range for a given (count, workers), so per-chunk partial results
/// can be merged in chunk order.
template <class Fn>
void for_each_chunk(std::size_t count, Partition p, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(p.workers, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    fn(std::size_t{0}, count, std::size_t{0});
    return;
  }
  const std::size_t step = (count + workers - 1) / workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  for (std::size_t k = 0; k < workers; ++k) {
    const std::size_t begin = std::min(count, k * step);
    const std::size_t end = std::min(count, begin + step);
    threads.emplace_back([&, begin, end, k] {
      try {
        fn(begin, end, k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// Number of chunks `for_each_chunk` will actually use.
inline std::size_t chunk_count(std::size_t count, Partition p) {
  return std::clamp<std::size_t>(p.workers, 1, std::max<std::size_t>(count, 1));
}

}  // namespace cloudcomp
