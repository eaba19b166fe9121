#pragma once

// Adaptive one-step integrators for small autonomous systems y' = f(y).
//
//   dormand_prince  explicit 5(4) pair, FSAL, for non-stiff problems
//   rosenbrock      4th-order Kaps–Rentrop/Shampine L-stable pair with the
//                   analytic Jacobian, for stiff timescale separation

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "omsense/error.hpp"

namespace omsense {

enum class Method { dormand_prince, rosenbrock };

inline const char* to_string(Method m) { return m == Method::rosenbrock ? "rosenbrock" : "dormand-prince"; }

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  Method method = Method::rosenbrock;
  /// First trial step; 0 picks one from |f(y0)|.
  double initial_step = 0.0;
  double max_step = 0.0;  ///< 0 means unbounded
  std::size_t max_steps = 2'000'000;
  /// ‖y‖∞ above this raises Diverged.
  double divergence_bound = 1e12;
};

/// Integrates a fixed-size system in place. `f(y)` returns y', `jac(y)` the
/// Jacobian (only used by the Rosenbrock method). The step size carries over
/// between calls to advance(), so a trajectory can be produced segment by
/// segment without restarting the controller.
template <int N>
class Stepper {
 public:
  using Vec = Eigen::Matrix<double, N, 1>;
  using Mat = Eigen::Matrix<double, N, N>;

  explicit Stepper(OdeOptions opts) : opts_(opts) {
    if (!(opts_.rtol > 0.0) || !(opts_.atol >= 0.0)) throw UsageError("integrator tolerances must be positive");
  }

  std::size_t steps() const { return steps_; }
  std::size_t rejected() const { return rejected_; }
  double step_size() const { return h_; }

  /// Advances y from t to t_end. `observer(t, y)` runs after every accepted
  /// step; returning false stops early. Returns the time reached.
  template <class F, class J, class Obs>
  double advance(Vec& y, double t, double t_end, F&& f, J&& jac, Obs&& observer) {
    if (!(t_end >= t)) throw UsageError("integration end time precedes start time");
    if (t_end == t) return t;
    if (h_ <= 0.0) h_ = opts_.initial_step > 0.0 ? opts_.initial_step : initial_step(y, f, t_end - t);
    bool have_k1 = false;
    Vec k1;
    while (t < t_end) {
      if (steps_ + rejected_ >= opts_.max_steps)
        throw StiffnessError("step budget exhausted at t = " + std::to_string(t) +
                                 "; reduce the timescale separation or use the implicit method",
                             t);
      double h = std::min(h_, t_end - t);
      if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
      const bool last = h == t_end - t;
      if (h < 1e-14 * std::max(1.0, std::abs(t)))
        throw StiffnessError("step size underflow at t = " + std::to_string(t) +
                                 "; reduce the timescale separation or use the implicit method",
                             t);

      Vec ynew, err;
      if (opts_.method == Method::dormand_prince) {
        if (!have_k1) {
          k1 = f(y);
          have_k1 = true;
        }
        dp_step(y, h, k1, f, ynew, err);
      } else {
        ros_step(y, h, f, jac, ynew, err);
      }
      const double e = error_norm(y, ynew, err);
      if (!std::isfinite(e)) {
        h_ = 0.25 * h;
        ++rejected_;
        have_k1 = false;
        continue;
      }
      if (e <= 1.0) {
        t = last ? t_end : t + h;
        y = ynew;
        ++steps_;
        if (opts_.method == Method::dormand_prince) k1 = dp_last_;
        const double norm = y.template lpNorm<Eigen::Infinity>();
        if (!(norm <= opts_.divergence_bound))
          throw Diverged("state norm exceeded the divergence bound at t = " + std::to_string(t), t, norm);
        h_ = h * grow_factor(e);
        if (!observer(t, static_cast<const Vec&>(y))) return t;
      } else {
        h_ = h * shrink_factor(e);
        ++rejected_;
      }
    }
    return t;
  }

 private:
  OdeOptions opts_;
  double h_ = 0.0;
  std::size_t steps_ = 0;
  std::size_t rejected_ = 0;
  Vec dp_last_;

  double error_norm(const Vec& y0, const Vec& y1, const Vec& err) const {
    double sum = 0.0;
    for (int i = 0; i < y0.size(); ++i) {
      const double sc = opts_.atol + opts_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      const double r = err[i] / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(y0.size()));
  }

  double grow_factor(double e) const {
    if (opts_.method == Method::dormand_prince) {
      if (e == 0.0) return 5.0;
      return std::clamp(0.9 * std::pow(e, -0.2), 0.2, 5.0);
    }
    if (e == 0.0) return 1.5;
    return std::min(1.5, 0.9 * std::pow(e, -0.25));
  }

  double shrink_factor(double e) const {
    if (opts_.method == Method::dormand_prince) return std::clamp(0.9 * std::pow(e, -0.2), 0.2, 1.0);
    return std::max(0.5, 0.9 * std::pow(e, -1.0 / 3.0));
  }

  template <class F>
  double initial_step(const Vec& y, F& f, double span) const {
    const Vec dy = f(y);
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double sc = opts_.atol + opts_.rtol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(dy[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  // Dormand–Prince 5(4) tableau.
  template <class F>
  void dp_step(const Vec& y, double h, const Vec& k1, F& f, Vec& ynew, Vec& err) {
    constexpr double a21 = 1.0 / 5.0;
    constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
    constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
    constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                     a54 = -212.0 / 729.0;
    constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                     a65 = -5103.0 / 18656.0;
    constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0, b5 = -2187.0 / 6784.0,
                     b6 = 11.0 / 84.0;
    constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                     e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
    const Vec k2 = f(Vec(y + h * a21 * k1));
    const Vec k3 = f(Vec(y + h * (a31 * k1 + a32 * k2)));
    const Vec k4 = f(Vec(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
    const Vec k5 = f(Vec(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const Vec k6 = f(Vec(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    dp_last_ = f(ynew);
    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * dp_last_);
  }

  // Shampine's parameter set for the Kaps–Rentrop scheme.
  template <class F, class J>
  void ros_step(const Vec& y, double h, F& f, J& jac, Vec& ynew, Vec& err) const {
    constexpr double gam = 1.0 / 2.0;
    constexpr double a21 = 2.0, a31 = 48.0 / 25.0, a32 = 6.0 / 25.0;
    constexpr double c21 = -8.0, c31 = 372.0 / 25.0, c32 = 12.0 / 5.0;
    constexpr double c41 = -112.0 / 125.0, c42 = -54.0 / 125.0, c43 = -2.0 / 5.0;
    constexpr double b1 = 19.0 / 9.0, b2 = 1.0 / 2.0, b3 = 25.0 / 108.0, b4 = 125.0 / 108.0;
    constexpr double e1 = 17.0 / 54.0, e2 = 7.0 / 36.0, e3 = 0.0, e4 = 125.0 / 108.0;
    const Mat a = Mat::Identity(y.size(), y.size()) / (gam * h) - jac(y);
    const Eigen::PartialPivLU<Mat> lu(a);
    const Vec g1 = lu.solve(f(y));
    const Vec g2 = lu.solve(Vec(f(Vec(y + a21 * g1)) + c21 * g1 / h));
    const Vec f3 = f(Vec(y + a31 * g1 + a32 * g2));
    const Vec g3 = lu.solve(Vec(f3 + (c31 * g1 + c32 * g2) / h));
    const Vec g4 = lu.solve(Vec(f3 + (c41 * g1 + c42 * g2 + c43 * g3) / h));
    ynew = y + b1 * g1 + b2 * g2 + b3 * g3 + b4 * g4;
    err = e1 * g1 + e2 * g2 + e3 * g3 + e4 * g4;
  }
};

}  // namespace omsense
