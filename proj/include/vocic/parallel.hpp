#ifndef VOCIC_PARALLEL_HPP
#define VOCIC_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace vocic {

inline thread_local bool in_parallel_worker = false;

// Runs fn(0) .. fn(count-1) on a pool of workers pulling indices from a
// shared counter.  Callers are responsible for writing results into
// preallocated slots keyed by index, so the outcome does not depend on the
// number of workers.  Nested calls degrade to serial execution.
inline void parallel_for(std::size_t count, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (threads <= 1 || count == 1 || in_parallel_worker) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  unsigned workers = threads < count ? threads : (unsigned)count;
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      in_parallel_worker = true;
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace vocic

#endif
