#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace casimir::cli {

/// Worker count: CASIMIR_KIT_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
inline int worker_threads() {
  if (const char* env = std::getenv("CASIMIR_KIT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Applies `fn` to every item on up to `threads` workers. Results keep input
/// order; the first exception by index is rethrown after all jobs finish.
template <class T, class Fn>
auto parallel_map(const std::vector<T>& items, Fn fn, int threads) {
  using R = decltype(fn(items.front()));
  std::vector<std::optional<R>> results(items.size());
  std::vector<std::exception_ptr> errors(items.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      try {
        results[i].emplace(fn(items[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const auto count = std::min<std::size_t>(std::max(threads, 1), items.size());
  if (count <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(items.size());
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace casimir::cli
