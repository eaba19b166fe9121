#pragma once

// Uniform parameter axes, 2D result grids and a small thread fan-out.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "omsense/error.hpp"

namespace omsense {

struct Axis {
  double first = 0.0;
  double last = 0.0;
  std::size_t points = 2;

  double value(std::size_t i) const {
    if (points < 2) return first;
    if (i + 1 == points) return last;
    return first + (last - first) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  double step() const { return points < 2 ? 0.0 : (last - first) / static_cast<double>(points - 1); }
  std::vector<double> values() const {
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) v[i] = value(i);
    return v;
  }

  void validate(const char* name) const {
    if (points < 2) throw UsageError(std::string(name) + ": an axis needs at least 2 points");
    if (!std::isfinite(first) || !std::isfinite(last))
      throw UsageError(std::string(name) + ": axis bounds must be finite");
  }
};

/// Cells indexed (i, j) with i along `x` and j along `y`, stored with j fastest.
template <class T>
struct GridResult {
  Axis x;
  Axis y;
  std::vector<T> cells;

  GridResult() = default;
  GridResult(Axis x_, Axis y_) : x(x_), y(y_), cells(x_.points * y_.points) {}

  T& at(std::size_t i, std::size_t j) { return cells[i * y.points + j]; }
  const T& at(std::size_t i, std::size_t j) const { return cells[i * y.points + j]; }
};

/// 0 means "all hardware threads".
inline std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Calls fn(k) for k in [0, n) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& fn) {
  threads = std::min(resolve_threads(threads), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= n) return;
      try {
        fn(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Evaluates fn(x, y) on every cell of the grid.
template <class T, class F>
GridResult<T> evaluate_grid(const Axis& x, const Axis& y, std::size_t threads, F&& fn) {
  GridResult<T> out(x, y);
  parallel_for(x.points * y.points, threads, [&](std::size_t k) {
    const std::size_t i = k / y.points;
    const std::size_t j = k % y.points;
    out.cells[k] = fn(x.value(i), y.value(j));
  });
  return out;
}

}  // namespace omsense
