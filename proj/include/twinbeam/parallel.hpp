#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace twinbeam {

// Static-partition parallel loop. Each index is handled by exactly one worker
// and callers write results into per-index slots, so outputs do not depend on
// the worker count.
class Executor {
 public:
  explicit Executor(unsigned workers = 1) : workers_(std::max(1u, workers)) {}

  /// Worker count from TWINBEAM_WORKERS, else the hardware concurrency.
  static Executor from_environment();

  unsigned workers() const { return workers_; }

  template <class Fn>
  void parallel_for(std::size_t n, Fn&& fn) const {
    const std::size_t w = std::min<std::size_t>(workers_, n);
    if (w <= 1) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t) {
      const std::size_t begin = n * t / w;
      const std::size_t end = n * (t + 1) / w;
      threads.emplace_back([&, begin, end] {
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
  }

 private:
  unsigned workers_;
};

}  // namespace twinbeam
