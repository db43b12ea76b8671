#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace randfun {

// Runs fn(i) for i in [0, n) on up to `threads` workers, storing results by
// index. Workers take contiguous blocks, so the output never depends on
// the thread count. The first exception (lowest index) is rethrown.
template <class T, class Fn>
std::vector<T> parallel_map(std::int64_t n, int threads, Fn fn) {
  std::vector<T> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 0)));
  std::vector<std::exception_ptr> errors(out.size());
  auto work = [&](std::int64_t lo, std::int64_t hi) {
    for (std::int64_t i = lo; i < hi; ++i) {
      try {
        out[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int workers = static_cast<int>(std::clamp<std::int64_t>(threads, 1, std::max<std::int64_t>(n, 1)));
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back(work, n * w / workers, n * (w + 1) / workers);
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace randfun
