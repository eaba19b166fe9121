#pragma once

// Effective non-Hermitian 2x2 matrix of the waveguide-coupled cavities and
// its eigenvalues, by closed form and by a direct 2x2 eigensolver.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <cstddef>
#include <utility>
#include <vector>

#include "omsense/error.hpp"
#include "omsense/params.hpp"

namespace omsense {

using cplx = std::complex<double>;

/// The linear-optics subset of the parameters. Rates share one unit,
/// either rad/s or units of Γ (then Gamma = 1).
struct OpticalParams {
  double delta = 0.0;
  double kappa = 0.0;
  double Gamma = 1.0;
  double phi = 0.0;
};

inline OpticalParams optical(const PhysicalParams& p) {
  if (p.kappa1 != p.kappa2)
    throw UnsupportedConfiguration("kappa1 != kappa2: the two-cavity model assumes identical decay rates");
  return {p.delta, p.kappa1, p.Gamma, p.phi};
}

inline OpticalParams optical(const ReducedParams& r) { return {r.d, r.k, 1.0, r.phi}; }

struct EffectiveMatrix {
  cplx h11, h12, h21, h22;
  OpticalParams source;

  cplx trace() const { return h11 + h22; }
  cplx det() const { return h11 * h22 - h12 * h21; }
};

/// ℋ with diagonal ∓δ/2 − i(κ+Γ)/2 and off-diagonal (Γ/2)(sinΦ − i cosΦ):
/// coherent coupling (Γ/2)sinΦ, dissipative coupling (Γ/2)cosΦ.
inline EffectiveMatrix effective_matrix(const OpticalParams& p) {
  const double loss = 0.5 * (p.kappa + p.Gamma);
  const cplx off{0.5 * p.Gamma * std::sin(p.phi), -0.5 * p.Gamma * std::cos(p.phi)};
  return {cplx{-0.5 * p.delta, -loss}, off, off, cplx{0.5 * p.delta, -loss}, p};
}

inline EffectiveMatrix effective_matrix(const PhysicalParams& p) { return effective_matrix(optical(p)); }
inline EffectiveMatrix effective_matrix(const ReducedParams& r) { return effective_matrix(optical(r)); }

struct Spectrum {
  cplx lambda_plus;
  cplx lambda_minus;
  /// Modulus factor λ̃₀ and angle θ of the closed form; NaN when the
  /// spectrum came from the direct solver.
  double lambda0 = std::nan("");
  double theta = std::nan("");
};

namespace detail {

/// λ₊ is the longer-lived mode (larger Im); near-ties go to the larger Re.
inline Spectrum ordered(cplx a, cplx b, double scale) {
  const double tie = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  bool swap = false;
  if (std::abs(a.imag() - b.imag()) <= tie)
    swap = b.real() > a.real();
  else
    swap = b.imag() > a.imag();
  if (swap) std::swap(a, b);
  return {a, b};
}

}  // namespace detail

/// Closed form λ± = −i((κ+Γ)/2 ∓ (Γ/2)λ̃₀cos(θ/2)) ∓ (Γ/2)λ̃₀ sin(θ/2), with
/// λ̃₀ = (1 + δ⁴/Γ⁴ − 2(δ²/Γ²)cos2Φ)^¼ and θ the two-argument angle of
/// (Γ²cos2Φ − δ², Γ²sin2Φ).
inline Spectrum eigenvalues_closed_form(const OpticalParams& p) {
  if (!(p.Gamma > 0.0)) throw DomainError("Gamma must be positive");
  const double G2 = p.Gamma * p.Gamma;
  const double r = p.delta * p.delta / G2;
  const double c2 = std::cos(2.0 * p.phi);
  const double s2 = std::sin(2.0 * p.phi);
  // 1 + r² − 2r cos2Φ written as (r − cos2Φ)² + sin²2Φ to avoid cancellation near the EP.
  const double lambda0 = std::pow((r - c2) * (r - c2) + s2 * s2, 0.25);
  const double theta = std::atan2(G2 * s2, G2 * c2 - p.delta * p.delta);
  const double half = 0.5 * p.Gamma * lambda0;
  const double loss = 0.5 * (p.kappa + p.Gamma);
  const cplx plus{-half * std::sin(0.5 * theta), -(loss - half * std::cos(0.5 * theta))};
  const cplx minus{half * std::sin(0.5 * theta), -(loss + half * std::cos(0.5 * theta))};
  Spectrum s = detail::ordered(plus, minus, p.Gamma + p.kappa + std::abs(p.delta));
  s.lambda0 = lambda0;
  s.theta = theta;
  return s;
}

inline Spectrum eigenvalues_closed_form(const PhysicalParams& p) { return eigenvalues_closed_form(optical(p)); }
inline Spectrum eigenvalues_closed_form(const ReducedParams& r) { return eigenvalues_closed_form(optical(r)); }

/// Squared eigenvalue gap (λ₊ − λ₋)² of any 2x2 matrix.
inline cplx squared_gap(const EffectiveMatrix& m) {
  const cplx half_diff = 0.5 * (m.h11 - m.h22);
  return 4.0 * (half_diff * half_diff + m.h12 * m.h21);
}

/// Direct 2x2 eigenvalues from the characteristic quadratic. The smaller
/// root is recovered through the determinant when the two are far apart.
inline Spectrum eigenvalues_numeric(const EffectiveMatrix& m) {
  const cplx mean = 0.5 * m.trace();
  const cplx half_diff = 0.5 * (m.h11 - m.h22);
  const cplx root = std::sqrt(half_diff * half_diff + m.h12 * m.h21);
  cplx a = mean + root;
  cplx b = mean - root;
  if (std::abs(a) < std::abs(b)) std::swap(a, b);
  if (std::abs(a) > 0.0) {
    const cplx from_det = m.det() / a;
    // Only swap in the Vieta value when the direct one lost digits.
    if (std::abs(b) < 1e-3 * std::abs(a)) b = from_det;
  }
  double scale = std::max({std::abs(m.h11), std::abs(m.h12), std::abs(m.h21), std::abs(m.h22)});
  return detail::ordered(a, b, scale);
}

/// Weak-loss estimate Im λ₊ ≈ −½(κ + (Γ/2)φ²) of the long-lived mode at δ = 0.
inline double linewidth_suppression_approx(double kappa, double Gamma, double phi) {
  return -0.5 * (kappa + 0.5 * Gamma * phi * phi);
}

struct EpScan {
  double delta_min;
  double delta_max;
  std::size_t points = 2001;
  /// Coalescence threshold on |λ₊ − λ₋| in units of Γ.
  double threshold = 1e-6;
};

/// Detunings in the scan window where the two eigenvalues coalesce.
/// Local minima of the gap on the grid are refined by golden-section
/// search on |(λ₊ − λ₋)²| and accepted below the threshold.
inline std::vector<double> ep_locate(OpticalParams p, const EpScan& scan) {
  if (!(scan.delta_max > scan.delta_min) || scan.points < 2)
    throw UsageError("ep_locate: empty detuning scan range");
  auto gap2 = [&p](double delta) {
    OpticalParams q = p;
    q.delta = delta;
    return std::abs(squared_gap(effective_matrix(q)));
  };
  const std::size_t n = scan.points;
  const double step = (scan.delta_max - scan.delta_min) / static_cast<double>(n - 1);
  std::vector<double> grid(n), values(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = scan.delta_min + step * static_cast<double>(i);
    values[i] = gap2(grid[i]);
  }

  std::vector<double> eps;
  const double accept = scan.threshold * p.Gamma;
  for (std::size_t i = 0; i < n; ++i) {
    const bool left_ok = i == 0 || values[i] <= values[i - 1];
    const bool right_ok = i + 1 == n || values[i] < values[i + 1];
    if (!left_ok || !right_ok) continue;
    double lo = grid[i == 0 ? 0 : i - 1];
    double hi = grid[i + 1 == n ? n - 1 : i + 1];
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = gap2(x1), f2 = gap2(x2);
    for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * std::abs(hi); ++it) {
      if (f1 <= f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - inv_phi * (hi - lo);
        f1 = gap2(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + inv_phi * (hi - lo);
        f2 = gap2(x2);
      }
    }
    const double best = f1 <= f2 ? x1 : x2;
    if (std::sqrt(gap2(best)) < accept) {
      if (eps.empty() || std::abs(best - eps.back()) > step) eps.push_back(best);
    }
  }
  return eps;
}

}  // namespace omsense
