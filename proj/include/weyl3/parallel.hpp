#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weyl3 {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// out[i] = f(in[i]) on up to `threads` workers; results keep the input order.
/// The first exception thrown by any task is rethrown after all workers stop.
template <class In, class F>
auto parallel_map(const std::vector<In>& in, F f, unsigned threads = default_threads()) {
  using Out = decltype(f(in.front()));
  std::vector<Out> out(in.size());
  const std::size_t n = in.size();
  threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(in[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        out[i] = f(in[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace weyl3
