#pragma once

// Resource caps shared by the pipelines, and a deterministic parallel map.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstddef>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "semilin/error.hpp"

namespace semilin {

struct Options {
  std::size_t max_cosets = 100000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  unsigned jobs = 1;

  static Options with_budget(double seconds) {
    Options o;
    o.set_budget(seconds);
    return o;
  }
  void set_budget(double seconds) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                   std::chrono::duration<double>(seconds));
  }
  void check_deadline() const {
    if (deadline && std::chrono::steady_clock::now() > *deadline)
      throw ResourceError("wall-clock budget exceeded");
  }
  void check_cosets(std::size_t count) const {
    if (count > max_cosets)
      throw ResourceError("pattern too large: more than " + std::to_string(max_cosets) + " cosets");
  }
};

inline const Options& default_options() {
  static const Options opts;
  return opts;
}

/// Applies f to 0..n-1 on up to `jobs` threads. Results keep index order; if
/// any call throws, the exception of the smallest failing index is rethrown.
template <class F>
auto parallel_map(std::size_t n, unsigned jobs, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::atomic<std::size_t>& next) {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::atomic<std::size_t> next{0};
  const unsigned threads = jobs <= 1 || n <= 1 ? 1u : static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  if (threads == 1) {
    work(next);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&] { work(next); });
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace semilin
