#pragma once

// Mean-field equations of motion
//
//   α̇₁ = (iδ/2 − (κ+Γ)/2)α₁ − e^{iΦ}(Γ/2)α₂ − igqα₁ + Ω
//   α̇₂ = (−iδ/2 − (κ+Γ)/2)α₂ − e^{iΦ}(Γ/2)α₁
//   q̇  = ω_m p
//   ṗ  = −ω_m q − g|α₁|² − γ_m p
//
// on the real layout (Re α₁, Im α₁, Re α₂, Im α₂, q, p), plus fixed points,
// linear stability and quasi-static parameter sweeps.
//
// Integration runs in τ = Γt with fields in units of √(Γ/χ) and mechanics in
// units of Γ/g, which makes a steady state O(1) whatever the drive.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "omsense/error.hpp"
#include "omsense/ode.hpp"
#include "omsense/params.hpp"
#include "omsense/steadystate.hpp"

namespace omsense {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

struct MeanFieldState {
  std::complex<double> alpha1;
  std::complex<double> alpha2;
  double q = 0.0;
  double p = 0.0;

  double beta() const { return std::norm(alpha1); }

  Vec6 vec() const {
    Vec6 v;
    v << alpha1.real(), alpha1.imag(), alpha2.real(), alpha2.imag(), q, p;
    return v;
  }
  static MeanFieldState from(const Vec6& v) { return {{v[0], v[1]}, {v[2], v[3]}, v[4], v[5]}; }
  bool finite() const { return vec().allFinite(); }
};

inline MeanFieldState to_state(const SteadyState& s) { return {s.alpha1, s.alpha2, s.q, s.p}; }

namespace detail {

struct Rates {
  double half_delta, half_K, half_G, cphi, sphi, g, omega_m, gamma_m, drive;

  explicit Rates(const PhysicalParams& p)
      : half_delta(0.5 * p.delta),
        half_K(0.5 * (p.kappa() + p.Gamma)),
        half_G(0.5 * p.Gamma),
        cphi(std::cos(p.phi)),
        sphi(std::sin(p.phi)),
        g(p.g),
        omega_m(p.omega_m),
        gamma_m(p.gamma_m),
        drive(std::sqrt(p.drive())) {}

  Vec6 rhs(const Vec6& y) const {
    const double x1 = y[0], y1 = y[1], x2 = y[2], y2 = y[3], q = y[4], pm = y[5];
    const double d1 = half_delta - g * q;
    Vec6 f;
    f[0] = -half_K * x1 - d1 * y1 - half_G * (cphi * x2 - sphi * y2) + drive;
    f[1] = d1 * x1 - half_K * y1 - half_G * (sphi * x2 + cphi * y2);
    f[2] = -half_K * x2 + half_delta * y2 - half_G * (cphi * x1 - sphi * y1);
    f[3] = -half_delta * x2 - half_K * y2 - half_G * (sphi * x1 + cphi * y1);
    f[4] = omega_m * pm;
    f[5] = -omega_m * q - g * (x1 * x1 + y1 * y1) - gamma_m * pm;
    return f;
  }

  Mat6 jac(const Vec6& y) const {
    const double x1 = y[0], y1 = y[1], q = y[4];
    const double d1 = half_delta - g * q;
    const double gc = half_G * cphi, gs = half_G * sphi;
    Mat6 J;
    // clang-format off
    J << -half_K, -d1,     -gc,         gs,          g * y1,  0.0,
         d1,      -half_K, -gs,         -gc,         -g * x1, 0.0,
         -gc,     gs,      -half_K,     half_delta,  0.0,     0.0,
         -gs,     -gc,     -half_delta, -half_K,     0.0,     0.0,
         0.0,     0.0,     0.0,         0.0,         0.0,     omega_m,
         -2.0 * g * x1, -2.0 * g * y1, 0.0, 0.0,     -omega_m, -gamma_m;
    // clang-format on
    return J;
  }
};

}  // namespace detail

/// Right-hand side of the mean-field equations.
inline MeanFieldState derivatives(const MeanFieldState& s, const PhysicalParams& p) {
  return MeanFieldState::from(detail::Rates(p).rhs(s.vec()));
}

/// Analytic 6×6 Jacobian of derivatives() in the real layout.
inline Mat6 jacobian(const MeanFieldState& s, const PhysicalParams& p) { return detail::Rates(p).jac(s.vec()); }

/// Diagonal change of variables y = S·u, t = τ/Γ used by the integrators.
struct Scaling {
  double Gamma = 1.0;
  double field = 1.0;
  double mech = 1.0;

  explicit Scaling(const PhysicalParams& p) : Gamma(p.Gamma) {
    const double chi = p.chi();
    const double I = p.drive();
    if (chi > 0.0)
      field = std::sqrt(p.Gamma / chi);
    else if (I > 0.0)
      field = std::sqrt(I) / p.Gamma;
    mech = p.g > 0.0 ? p.Gamma / p.g : 1.0;
  }

  Vec6 diag() const {
    Vec6 d;
    d << field, field, field, field, mech, mech;
    return d;
  }
  Vec6 to_scaled(const MeanFieldState& s) const { return s.vec().cwiseQuotient(diag()); }
  MeanFieldState from_scaled(const Vec6& u) const { return MeanFieldState::from(u.cwiseProduct(diag())); }
};

namespace detail {

/// du/dτ and its Jacobian in scaled variables.
struct ScaledSystem {
  Rates rates;
  Scaling scaling;
  Vec6 d;
  Vec6 inv_d;

  explicit ScaledSystem(const PhysicalParams& p)
      : rates(p), scaling(p), d(scaling.diag()), inv_d(scaling.diag().cwiseInverse()) {}

  Vec6 rhs(const Vec6& u) const {
    return rates.rhs(u.cwiseProduct(d)).cwiseProduct(inv_d) / scaling.Gamma;
  }
  Mat6 jac(const Vec6& u) const {
    return inv_d.asDiagonal() * rates.jac(u.cwiseProduct(d)) * d.asDiagonal() / scaling.Gamma;
  }
  /// ‖du/dτ‖ relative to max(1, ‖u‖).
  double residual(const Vec6& u) const { return rhs(u).norm() / std::max(1.0, u.norm()); }
  /// Length of the Newton step to the nearby fixed point, relative to
  /// max(1, ‖u‖). Unlike the residual it is not shrunk by slow modes.
  double newton_distance(const Vec6& u) const {
    const Vec6 du = jac(u).partialPivLu().solve(rhs(u));
    return du.allFinite() ? du.norm() / std::max(1.0, u.norm()) : std::numeric_limits<double>::infinity();
  }
};

}  // namespace detail

struct Trajectory {
  std::vector<double> t;  ///< s
  std::vector<MeanFieldState> states;
  std::size_t steps = 0;
};

/// Integrates from s0 over [0, t_end] (seconds) and samples `samples`
/// uniformly spaced states including both ends.
inline Trajectory integrate(const MeanFieldState& s0, const PhysicalParams& p, double t_end,
                            const OdeOptions& opts = {}, std::size_t samples = 201) {
  p.validate();
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw UsageError("t_end must be finite and non-negative");
  if (samples < 2) throw UsageError("a trajectory needs at least 2 samples");
  if (!s0.finite()) throw UsageError("initial state must be finite");
  const detail::ScaledSystem sys(p);
  auto f = [&sys](const Vec6& u) { return sys.rhs(u); };
  auto J = [&sys](const Vec6& u) { return sys.jac(u); };
  Stepper<6> stepper(opts);
  Vec6 u = sys.scaling.to_scaled(s0);
  Trajectory tr;
  tr.t.reserve(samples);
  tr.states.reserve(samples);
  tr.t.push_back(0.0);
  tr.states.push_back(s0);
  const double tau_end = t_end * p.Gamma;
  double tau = 0.0;
  for (std::size_t k = 1; k < samples; ++k) {
    const double target =
        k + 1 == samples ? tau_end : tau_end * static_cast<double>(k) / static_cast<double>(samples - 1);
    try {
      tau = stepper.advance(u, tau, target, f, J, [](double, const Vec6&) { return true; });
    } catch (const Diverged& e) {
      throw Diverged(e.what(), e.time() / p.Gamma, e.norm());
    } catch (const StiffnessError& e) {
      throw StiffnessError(e.what(), e.time() / p.Gamma);
    }
    tr.t.push_back(target / p.Gamma);
    tr.states.push_back(sys.scaling.from_scaled(u));
  }
  tr.steps = stepper.steps();
  return tr;
}

struct StabilityReport {
  std::complex<double> leading;  ///< Jacobian eigenvalue with the largest real part (rad/s)
  double max_real = 0.0;
  bool stable = true;
};

namespace detail {

inline StabilityReport stability_scaled(const ScaledSystem& sys, const Vec6& u, Vec6* unstable_direction) {
  Eigen::EigenSolver<Mat6> es(sys.jac(u), unstable_direction != nullptr);
  const auto ev = es.eigenvalues();
  int lead = 0;
  for (int i = 1; i < 6; ++i)
    if (ev[i].real() > ev[lead].real()) lead = i;
  StabilityReport r;
  r.leading = ev[lead] * sys.scaling.Gamma;
  r.max_real = r.leading.real();
  r.stable = r.max_real < 0.0;
  if (unstable_direction) {
    Vec6 v = es.eigenvectors().col(lead).real();
    if (v.norm() == 0.0) v = es.eigenvectors().col(lead).imag();
    *unstable_direction = v / v.norm();
  }
  return r;
}

}  // namespace detail

/// Residual threshold (relative, in scaled units) below which a state counts as a fixed point.
inline constexpr double fixed_point_tolerance = 1e-10;

/// Eigenvalues of the Jacobian at a fixed point; stable iff max Re < 0.
inline StabilityReport linear_stability(const MeanFieldState& s, const PhysicalParams& p,
                                        double tol = fixed_point_tolerance) {
  p.validate();
  const detail::ScaledSystem sys(p);
  const Vec6 u = sys.scaling.to_scaled(s);
  const double res = sys.residual(u);
  if (!(res < tol))
    throw UsageError("linear_stability: state is not a fixed point (relative residual " + std::to_string(res) + ")");
  return detail::stability_scaled(sys, u, nullptr);
}

struct SettleOptions {
  double tol = fixed_point_tolerance;
  OdeOptions ode{};
  /// Time cutoff in seconds; 0 picks 10³ × max(mechanical period, mechanical relaxation time).
  double cutoff = 0.0;
  /// Newton-refine the endpoint with the analytic Jacobian once it is inside the basin.
  bool polish = true;
  /// When the endpoint is an unstable fixed point, perturb along the unstable eigenvector and continue.
  std::size_t max_kicks = 4;
};

struct Settled {
  MeanFieldState state;
  double time = 0.0;      ///< s
  double residual = 0.0;  ///< relative scaled residual at the returned state
  std::size_t steps = 0;
  std::size_t kicks = 0;
};

inline double default_settle_cutoff(const PhysicalParams& p) {
  const double period = constants::two_pi / p.omega_m;
  const double relax = p.gamma_m / (p.omega_m * p.omega_m);
  return 1e3 * std::max(period, relax);
}

/// Integrates from s0 until ‖du/dτ‖ < tol·max(1, ‖u‖) and returns the fixed point reached.
inline Settled settle(const MeanFieldState& s0, const PhysicalParams& p, const SettleOptions& opts = {}) {
  p.validate();
  if (!(opts.tol > 0.0)) throw UsageError("settle tolerance must be positive");
  if (!s0.finite()) throw UsageError("initial state must be finite");
  const detail::ScaledSystem sys(p);
  auto f = [&sys](const Vec6& u) { return sys.rhs(u); };
  auto J = [&sys](const Vec6& u) { return sys.jac(u); };
  const double span = (opts.cutoff > 0.0 ? opts.cutoff : default_settle_cutoff(p)) * p.Gamma;
  auto converged = [&](const Vec6& u) { return sys.residual(u) < opts.tol && sys.newton_distance(u) < opts.tol; };

  Stepper<6> stepper(opts.ode);
  Vec6 u = sys.scaling.to_scaled(s0);
  double tau = 0.0;
  double limit = span;
  Settled out;
  for (;;) {
    if (!converged(u)) {
      try {
        tau = stepper.advance(u, tau, limit, f, J, [&](double, const Vec6& v) { return !converged(v); });
      } catch (const Diverged& e) {
        throw Diverged(e.what(), e.time() / p.Gamma, e.norm());
      } catch (const StiffnessError& e) {
        throw StiffnessError(e.what(), e.time() / p.Gamma);
      }
      if (!converged(u)) throw NotConverged("settle: time cutoff reached before convergence", sys.residual(u));
    }
    if (opts.polish) {
      for (int it = 0; it < 30; ++it) {
        const Vec6 du = J(u).partialPivLu().solve(f(u));
        if (!du.allFinite() || du.norm() > 1e-3 * std::max(1.0, u.norm())) break;
        const Vec6 next = u - du;
        if (sys.residual(next) > sys.residual(u)) break;
        u = next;
        if (du.norm() <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, u.norm())) break;
      }
    }
    Vec6 dir;
    const auto report = detail::stability_scaled(sys, u, &dir);
    if (report.stable || out.kicks >= opts.max_kicks) break;
    ++out.kicks;
    u += 1e-4 * std::max(1.0, u.norm()) * dir;
    limit = tau + span;
  }
  out.state = sys.scaling.from_scaled(u);
  out.time = tau / p.Gamma;
  out.residual = sys.residual(u);
  out.steps = stepper.steps();
  return out;
}

/// Relative residual of a state in the units settle() uses.
inline double fixed_point_residual(const MeanFieldState& s, const PhysicalParams& p) {
  const detail::ScaledSystem sys(p);
  return sys.residual(sys.scaling.to_scaled(s));
}

enum class SweepParam { phi, delta };

inline const char* to_string(SweepParam s) { return s == SweepParam::phi ? "phi" : "delta"; }

struct SweepStep {
  double value = 0.0;  ///< swept parameter (rad for φ, rad/s for δ)
  double beta = 0.0;
  Branch branch = Branch::single;
  bool stable = true;
  bool jump = false;  ///< the state left its branch between the previous step and this one
  MeanFieldState state;
};

struct HysteresisTrace {
  SweepParam param = SweepParam::phi;
  std::vector<SweepStep> forward;
  std::vector<SweepStep> backward;  ///< same path reversed
  double loop_area = 0.0;           ///< ∫|β_back − β_fwd| d(value)
};

namespace detail {

inline PhysicalParams with_swept(PhysicalParams p, SweepParam which, double value) {
  (which == SweepParam::phi ? p.phi : p.delta) = value;
  return p;
}

inline void require_monotone(const std::vector<double>& path) {
  if (path.size() < 2) throw UsageError("a sweep path needs at least 2 values");
  const bool up = path.back() > path.front();
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (up ? !(path[i] > path[i - 1]) : !(path[i] < path[i - 1]))
      throw UsageError("sweep path must be strictly monotone");
  }
}

inline bool middle_between(const std::vector<IntensityRoot>& roots, double lo, double hi) {
  if (roots.size() != 3) return false;
  if (lo > hi) std::swap(lo, hi);
  return roots[1].beta > lo && roots[1].beta < hi;
}

}  // namespace detail

/// One quasi-static leg: settle at each path value starting from the
/// previous endpoint (the first from `start`).
inline std::vector<SweepStep> sweep_leg(const PhysicalParams& base, SweepParam which, const std::vector<double>& path,
                                        const MeanFieldState& start, const SettleOptions& opts = {}) {
  detail::require_monotone(path);
  std::vector<SweepStep> out;
  out.reserve(path.size());
  MeanFieldState s = start;
  std::vector<IntensityRoot> prev_roots;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const PhysicalParams p = detail::with_swept(base, which, path[i]);
    std::vector<IntensityRoot> roots;
    try {
      s = settle(s, p, opts).state;
      roots = solve_intensity(coefficients(p));
    } catch (const std::exception& e) {
      throw SweepError(std::string("sweep step ") + std::to_string(i) + ": " + e.what(), i);
    }
    SweepStep st;
    st.value = path[i];
    st.beta = s.beta();
    st.state = s;
    std::size_t best = 0;
    for (std::size_t k = 1; k < roots.size(); ++k)
      if (std::abs(std::log(roots[k].beta / st.beta)) < std::abs(std::log(roots[best].beta / st.beta))) best = k;
    st.branch = roots[best].branch;
    st.stable = roots[best].stable;
    if (i > 0) {
      const double b0 = out.back().beta;
      st.jump = detail::middle_between(roots, b0, st.beta) || detail::middle_between(prev_roots, b0, st.beta);
    }
    prev_roots = std::move(roots);
    out.push_back(st);
  }
  return out;
}

/// ∫|β_b − β_f| over the path by the trapezoid rule; `backward` runs in reverse.
inline double loop_area(const std::vector<SweepStep>& forward, const std::vector<SweepStep>& backward) {
  if (forward.size() != backward.size()) throw UsageError("loop_area: legs differ in length");
  const std::size_t n = forward.size();
  double area = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double d0 = std::abs(backward[n - i].beta - forward[i - 1].beta);
    const double d1 = std::abs(backward[n - 1 - i].beta - forward[i].beta);
    area += 0.5 * (d0 + d1) * std::abs(forward[i].value - forward[i - 1].value);
  }
  return area;
}

/// Forward leg from the vacuum state, then the reversed path from the forward endpoint.
inline HysteresisTrace hysteresis_sweep(const PhysicalParams& base, SweepParam which,
                                        const std::vector<double>& path, const SettleOptions& opts = {}) {
  base.validate();
  HysteresisTrace tr;
  tr.param = which;
  tr.forward = sweep_leg(base, which, path, MeanFieldState{}, opts);
  const std::vector<double> back(path.rbegin(), path.rend());
  try {
    tr.backward = sweep_leg(base, which, back, tr.forward.back().state, opts);
  } catch (const SweepError& e) {
    throw SweepError(e.what(), path.size() + e.step());
  }
  tr.loop_area = loop_area(tr.forward, tr.backward);
  return tr;
}

}  // namespace omsense
