#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gpcq {

// Global worker count. Affects wall time only: every reduction below uses a
// fixed chunk decomposition combined in index order, so results are
// bit-identical for any setting.
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}

inline void set_thread_count(int n) { thread_count().store(n < 1 ? 1 : n); }

namespace detail {

inline constexpr std::size_t kChunk = 8192;

// Runs fn(t) for t in [0, n_tasks) on up to thread_count() workers.
template <class Fn>
void run_workers(std::size_t n_tasks, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(thread_count().load()), n_tasks);
  if (workers <= 1) {
    for (std::size_t t = 0; t < n_tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&] {
    for (std::size_t t = next.fetch_add(1); t < n_tasks; t = next.fetch_add(1)) fn(t);
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

}  // namespace detail

// fn(i) for i in [0, n); iterations must be independent.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  detail::run_workers(chunks, [&](std::size_t c) {
    const std::size_t lo = c * detail::kChunk;
    const std::size_t hi = std::min(n, lo + detail::kChunk);
    for (std::size_t i = lo; i < hi; ++i) fn(i);
  });
}

// Sum of term(i) over [0, n). Chunk partials may be produced concurrently but
// are always combined in ascending chunk order.
template <class Term>
double deterministic_sum(std::size_t n, Term&& term) {
  const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<double> partial(chunks, 0.0);
  detail::run_workers(chunks, [&](std::size_t c) {
    const std::size_t lo = c * detail::kChunk;
    const std::size_t hi = std::min(n, lo + detail::kChunk);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[c] = s;
  });
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

// Max of term(i) over [0, n); exact regardless of evaluation order.
template <class Term>
double deterministic_max(std::size_t n, Term&& term) {
  const std::size_t chunks = (n + detail::kChunk - 1) / detail::kChunk;
  std::vector<double> partial(chunks, 0.0);
  detail::run_workers(chunks, [&](std::size_t c) {
    const std::size_t lo = c * detail::kChunk;
    const std::size_t hi = std::min(n, lo + detail::kChunk);
    double m = 0.0;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, term(i));
    partial[c] = m;
  });
  double total = 0.0;
  for (double p : partial) total = std::max(total, p);
  return total;
}

}  // namespace gpcq
