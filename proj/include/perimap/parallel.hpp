#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace perimap {

/// Splits [0, count) into contiguous chunks and runs fn(begin, end, worker)
/// on up to `threads` workers. The first exception thrown by any worker is
/// rethrown on the calling thread.
template <typename Fn>
void parallel_chunks(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1U, threads);
  if (threads == 1 || count < 2) {
    fn(std::uint64_t{0}, count, 0U);
    return;
  }
  const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, count));
  const std::uint64_t chunk = (count + workers - 1) / workers;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t begin = std::min(count, w * chunk);
      const std::uint64_t end = std::min(count, begin + chunk);
      pool.emplace_back([&, begin, end, w] {
        try {
          fn(begin, end, w);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

/// Dynamic scheduling over independent work items: fn(i) for i in [0, count).
template <typename Fn>
void parallel_for(std::uint64_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1U, threads);
  if (threads == 1 || count < 2) {
    for (std::uint64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  parallel_chunks(threads, threads, [&](std::uint64_t, std::uint64_t, unsigned) {
    for (std::uint64_t i = next++; i < count; i = next++) fn(i);
  });
}

}  // namespace perimap
