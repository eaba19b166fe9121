#pragma once

// Real roots of the monic cubic x³ + a x² + b x + c = 0.
//
// Initial estimates come from the depressed cubic (trigonometric form when
// there are three real roots, Cardano otherwise). Each estimate is then
// polished by Newton iteration inside a bracket delimited by the critical
// points of the cubic, falling back to bisection whenever a Newton step
// would leave the bracket. The root count is decided from the signs of the
// cubic at its critical points, which stays consistent with the fold
// (turning-point) test used elsewhere.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>

namespace omsense {

template <class T>
struct CubicRoots {
  std::array<T, 3> x{};
  std::size_t count = 0;

  const T* begin() const { return x.data(); }
  const T* end() const { return x.data() + count; }
};

namespace detail {

template <class T>
struct Cubic {
  T a, b, c;
  T value(T x) const { return ((x + a) * x + b) * x + c; }
  T slope(T x) const { return (T(3) * x + T(2) * a) * x + b; }
  /// Magnitude scale of the terms of value(x), for rounding-level comparisons.
  T magnitude(T x) const {
    const T ax = std::abs(x);
    return ax * ax * ax + std::abs(a) * ax * ax + std::abs(b) * ax + std::abs(c);
  }
};

/// Newton polish of `x` on [lo, hi], where value(lo) and value(hi) have opposite signs.
template <class T>
T polish(const Cubic<T>& f, T x, T lo, T hi) {
  T flo = f.value(lo);
  if (flo == T(0)) return lo;
  if (f.value(hi) == T(0)) return hi;
  if (!(x > lo && x < hi)) x = T(0.5) * (lo + hi);
  T best = x;
  T fbest = std::abs(f.value(x));
  for (int it = 0; it < 200; ++it) {
    const T fx = f.value(x);
    if (fx == T(0)) return x;
    if (std::abs(fx) < fbest) {
      fbest = std::abs(fx);
      best = x;
    }
    if ((fx < T(0)) == (flo < T(0)))
      lo = x;
    else
      hi = x;
    const T d = f.slope(x);
    T next = d != T(0) ? x - fx / d : T(0.5) * (lo + hi);
    if (!(next > lo && next < hi)) next = T(0.5) * (lo + hi);
    if (std::abs(next - x) <= T(2) * std::numeric_limits<T>::epsilon() * std::abs(x) ||
        hi - lo <= T(2) * std::numeric_limits<T>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      x = next;
      break;
    }
    x = next;
  }
  return std::abs(f.value(x)) <= fbest ? x : best;
}

}  // namespace detail

/// Real roots of x³ + a x² + b x + c, ascending. A double root at a
/// critical point is reported twice (count 3).
template <class T>
CubicRoots<T> solve_monic_cubic(T a, T b, T c) {
  const detail::Cubic<T> f{a, b, c};
  const T eps = std::numeric_limits<T>::epsilon();

  // Depressed cubic t³ + p t + q with x = t − a/3.
  const T shift = a / T(3);
  const T p = b - a * a / T(3);
  const T q = T(2) * a * a * a / T(27) - a * b / T(3) + c;

  std::array<T, 3> guess{};
  std::size_t nguess = 0;
  const T disc = q * q / T(4) + p * p * p / T(27);
  if (p < T(0) && disc < T(0)) {
    const T m = T(2) * std::sqrt(-p / T(3));
    T arg = T(3) * q / (p * m);
    arg = std::max(T(-1), std::min(T(1), arg));
    const T theta = std::acos(arg) / T(3);
    for (int k = 0; k < 3; ++k)
      guess[nguess++] = m * std::cos(theta - T(2) * std::numbers::pi_v<T> * T(k) / T(3)) - shift;
  } else {
    const T s = std::sqrt(std::max(disc, T(0)));
    const T u = std::cbrt(-q / T(2) + (q < T(0) ? s : -s));
    const T t = u != T(0) ? u - p / (T(3) * u) : T(0);
    guess[nguess++] = t - shift;
  }
  std::sort(guess.begin(), guess.begin() + nguess);

  // Outer bracket from the Cauchy bound.
  const T bound = T(1) + std::max({std::abs(a), std::abs(b), std::abs(c)});

  CubicRoots<T> out;
  const T crit_disc = a * a - T(3) * b;
  if (crit_disc > T(0)) {
    const T r = std::sqrt(crit_disc);
    // Stable pair of roots of 3x² + 2a x + b.
    const T qq = -(a + std::copysign(r, a)) / T(3);
    T x1 = qq;
    T x2 = qq != T(0) ? b / (T(3) * qq) : T(0);
    if (x1 > x2) std::swap(x1, x2);
    const T f1 = f.value(x1);  // local maximum
    const T f2 = f.value(x2);  // local minimum
    const T tol1 = T(8) * eps * f.magnitude(x1);
    const T tol2 = T(8) * eps * f.magnitude(x2);
    const bool touch_max = std::abs(f1) <= tol1;
    const bool touch_min = std::abs(f2) <= tol2;
    if (f1 > tol1 && f2 < -tol2) {
      const T g0 = nguess == 3 ? guess[0] : x1 - T(1);
      const T g1 = nguess == 3 ? guess[1] : T(0.5) * (x1 + x2);
      const T g2 = nguess == 3 ? guess[2] : x2 + T(1);
      out.x[0] = detail::polish(f, g0, -bound, x1);
      out.x[1] = detail::polish(f, g1, x1, x2);
      out.x[2] = detail::polish(f, g2, x2, bound);
      out.count = 3;
    } else if (touch_max && f2 < -tol2) {
      out.x = {x1, x1, detail::polish(f, guess[nguess - 1], x2, bound)};
      out.count = 3;
    } else if (touch_min && f1 > tol1) {
      out.x = {detail::polish(f, guess[0], -bound, x1), x2, x2};
      out.count = 3;
    } else if (f1 < T(0)) {
      out.x[0] = detail::polish(f, guess[nguess - 1], x2, bound);
      out.count = 1;
    } else {
      out.x[0] = detail::polish(f, guess[0], -bound, x1);
      out.count = 1;
    }
  } else {
    out.x[0] = detail::polish(f, guess[0], -bound, bound);
    out.count = 1;
  }
  return out;
}

}  // namespace omsense
