#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lebesgue::detail {

/// Runs body(state, begin, end) over fixed-size chunks of [0, count) on up to
/// `workers` threads and returns the per-chunk results in chunk order. Chunk
/// boundaries depend only on `count` and `chunk`, so an ordered reduction of
/// the result is independent of the worker count.
template <class Result, class MakeState, class Body>
std::vector<Result> parallel_chunks(std::size_t count, std::size_t chunk, unsigned workers, MakeState make_state,
                                    Body body) {
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (count + chunk - 1) / chunk;
  std::vector<Result> results(chunks);
  const unsigned threads = static_cast<unsigned>(std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(chunks, 1)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    try {
      auto state = make_state();
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= chunks) break;
        results[c] = body(state, c * chunk, std::min(count, (c + 1) * chunk));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };

  if (threads <= 1) {
    run();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace lebesgue::detail
