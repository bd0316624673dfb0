#pragma once

// Deterministic fork-join helper: work items are indexed, workers own static
// index ranges, and results land in caller-owned slots, so output is
// identical for any thread count.

#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace netcg {

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

inline void parallel_for(size_t count, int threads, const std::function<void(size_t)>& fn) {
  if (count == 0) return;
  if (threads < 1) threads = 1;
  size_t workers = std::min<size_t>(threads, count);
  if (workers <= 1) {
    for (size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mu;
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace netcg
