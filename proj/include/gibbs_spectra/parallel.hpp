#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gibbs_spectra {

// Worker cap from GIBBS_SPECTRA_THREADS; 0 or 1 means serial, unset falls
// back to the hardware count.
inline int thread_cap() {
  if (const char* env = std::getenv("GIBBS_SPECTRA_THREADS")) {
    const int value = std::atoi(env);
    return value <= 0 ? 1 : value;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(0..count-1), fanned out over at most thread_cap() workers.  Callers
// write results into preallocated slots by index, so output order never
// depends on scheduling.
inline void parallel_for_index(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(count, thread_cap());
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gibbs_spectra
