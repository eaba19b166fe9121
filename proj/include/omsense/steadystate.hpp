#pragma once

// Steady-state intracavity intensity β = |α₁|² of the driven optomechanical
// cavity. Eliminating the auxiliary cavity and the mechanics gives
//
//   χ²β³ + χAβ² + Bβ = I,
//
// solved in the scaled form x³ + a x² + b x = s with x = χβ/Γ, a = A/Γ,
// b = B/Γ², s = Iχ/Γ³ so that all coefficients are O(1) or smaller.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omsense/cubic.hpp"
#include "omsense/error.hpp"
#include "omsense/grid.hpp"
#include "omsense/params.hpp"
#include "omsense/spectrum.hpp"

namespace omsense {

struct CubicCoefficients {
  double A = 0.0;      ///< rad/s
  double B = 0.0;      ///< (rad/s)²
  double chi = 0.0;    ///< rad/s
  double I = 0.0;      ///< s⁻²
  double Gamma = 1.0;  ///< scale used for the working form

  double a() const { return A / Gamma; }
  double b() const { return B / (Gamma * Gamma); }
  double s() const { return I * chi / (Gamma * Gamma * Gamma); }
  /// dI/dβ at β.
  double slope(double beta) const { return (3.0 * chi * beta + 2.0 * A) * chi * beta + B; }
  /// χ²β³ + χAβ² + Bβ − I.
  double residual(double beta) const { return ((chi * beta + A) * chi * beta + B) * beta - I; }
};

/// A = δ + Γ²[(κ+Γ)sin2Φ − δcos2Φ]/(δ²+(κ+Γ)²) and
/// B = (δ²+(κ+Γ)²)/4 + Γ⁴/(4(δ²+(κ+Γ)²)) − (Γ²/2)cos2Φ.
/// Both are evaluated from M = δ² + κ(κ+2Γ) + 2Γ²sin²Φ, which is the
/// combination δ² + (κ+Γ)² − Γ²cos2Φ without its cancellation near κ = δ = φ = 0.
inline CubicCoefficients coefficients(const OpticalParams& o, double chi, double I) {
  if (!(o.Gamma > 0.0)) throw DomainError("Gamma must be positive");
  const double G2 = o.Gamma * o.Gamma;
  const double K = o.kappa + o.Gamma;
  const double N = o.delta * o.delta + K * K;
  const double sphi = std::sin(o.phi);
  const double M = o.delta * o.delta + o.kappa * (o.kappa + 2.0 * o.Gamma) + 2.0 * G2 * sphi * sphi;
  const double s2 = std::sin(2.0 * o.phi);
  CubicCoefficients c;
  c.A = (o.delta * M + G2 * K * s2) / N;
  c.B = (M * M + G2 * G2 * s2 * s2) / (4.0 * N);
  c.chi = chi;
  c.I = I;
  c.Gamma = o.Gamma;
  return c;
}

inline CubicCoefficients coefficients(const PhysicalParams& p) {
  p.validate();
  return coefficients(optical(p), p.chi(), p.drive());
}

/// In units of Γ. With chi_t = 0 the drive cannot be recovered and I is NaN.
inline CubicCoefficients coefficients(const ReducedParams& r) {
  r.validate();
  const double I = r.chi_t > 0.0 ? r.drive_t / r.chi_t : std::nan("");
  return coefficients(optical(r), r.chi_t, I);
}

inline bool bistable_necessary(const CubicCoefficients& c) { return c.A < 0.0 && c.A * c.A > 3.0 * c.B; }

enum class Branch { single, lower, middle, upper };

inline const char* to_string(Branch b) {
  switch (b) {
    case Branch::single: return "single";
    case Branch::lower: return "lower";
    case Branch::middle: return "middle";
    case Branch::upper: return "upper";
  }
  return "?";
}

struct IntensityRoot {
  double beta = 0.0;
  bool stable = true;
  Branch branch = Branch::single;
  double slope = 0.0;  ///< dI/dβ at the root
};

/// Stability of each root from the sign of dI/dβ; zero slope (a fold) is unstable.
inline std::vector<bool> classify_roots(const std::vector<double>& betas, const CubicCoefficients& c) {
  std::vector<bool> flags;
  flags.reserve(betas.size());
  for (double beta : betas) {
    const double cb = c.chi * beta;
    const double size = 3.0 * cb * cb + 2.0 * std::abs(c.A) * cb + std::abs(c.B);
    flags.push_back(c.slope(beta) > 16.0 * std::numeric_limits<double>::epsilon() * size);
  }
  // Coincident roots are a tangency: both copies sit on the fold.
  for (std::size_t i = 1; i < betas.size(); ++i) {
    if (betas[i] == betas[i - 1]) flags[i] = flags[i - 1] = false;
  }
  return flags;
}

/// Non-negative real roots of the intensity cubic, ascending, with stability.
inline std::vector<IntensityRoot> solve_intensity(const CubicCoefficients& c) {
  if (!(c.I >= 0.0) || !std::isfinite(c.I)) throw DomainError("drive intensity must be finite and non-negative");
  if (!(c.chi >= 0.0) || !std::isfinite(c.chi)) throw DomainError("chi must be finite and non-negative");
  if (!(c.Gamma > 0.0)) throw DomainError("Gamma must be positive");

  std::vector<double> betas;
  if (c.chi == 0.0) {
    if (c.I == 0.0) {
      betas.push_back(0.0);
    } else {
      if (!(c.B > 0.0)) throw NoSolution("linear response with B <= 0 has no physical steady state");
      betas.push_back(c.I / c.B);
    }
  } else if (c.I == 0.0) {
    // β|c(β)|² = 0 and |c(β)|² > 0 off a measure-zero tangency.
    betas.push_back(0.0);
  } else {
    const auto roots = solve_monic_cubic(c.a(), c.b(), -c.s());
    const double to_beta = c.Gamma / c.chi;
    for (double x : roots)
      if (x > 0.0) betas.push_back(x * to_beta);
  }
  if (betas.empty()) throw NoSolution("the intensity cubic has no positive root");

  const auto stable = classify_roots(betas, c);
  std::vector<IntensityRoot> out(betas.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    out[i].beta = betas[i];
    out[i].stable = stable[i];
    out[i].slope = c.slope(betas[i]);
    if (betas.size() == 3)
      out[i].branch = i == 0 ? Branch::lower : (i == 1 ? Branch::middle : Branch::upper);
  }
  return out;
}

struct TurningPoints {
  double beta_minus;  ///< local maximum of I(β)
  double beta_plus;   ///< local minimum of I(β)
  /// Drive window (I(β₊), I(β₋)) inside which three roots exist.
  double I_low;
  double I_high;
};

/// β± = (−A ± √(A²−3B))/(3χ), present only when A < 0, A² > 3B and β₋ > 0.
inline std::optional<TurningPoints> turning_points(const CubicCoefficients& c) {
  if (!(c.chi > 0.0)) throw UnsupportedConfiguration("turning points need a nonzero Kerr coefficient");
  if (!bistable_necessary(c)) return std::nullopt;
  const double root = std::sqrt(c.A * c.A - 3.0 * c.B);
  const double plus = (-c.A + root) / (3.0 * c.chi);
  // β₊β₋ = B/(3χ²) keeps β₋ accurate when B is small.
  const double minus = c.B / (3.0 * c.chi * c.chi * plus);
  if (!(minus > 0.0)) return std::nullopt;
  auto intensity = [&c](double beta) { return ((c.chi * beta + c.A) * c.chi * beta + c.B) * beta; };
  return TurningPoints{minus, plus, intensity(plus), intensity(minus)};
}

struct SteadyState {
  double beta = 0.0;
  std::complex<double> alpha1;
  std::complex<double> alpha2;
  double q = 0.0;
  double p = 0.0;
  bool stable = true;
  Branch branch = Branch::single;
};

/// Fields at a root β: α₁ = Ω/c(β) with real Ω = √I,
/// c(β) = (K − iδ)/2 − (Γ²/2)e^{2iΦ}/(iδ + K) − iχβ,
/// α₂ = −Γe^{iΦ}α₁/(iδ + K), q = −gβ/ω_m, p = 0.
inline SteadyState reconstruct(const PhysicalParams& p, const IntensityRoot& r) {
  using namespace std::complex_literals;
  const double K = p.kappa() + p.Gamma;
  const std::complex<double> e1 = std::polar(1.0, p.phi);
  const std::complex<double> denom{K, p.delta};
  const std::complex<double> c = std::complex<double>{0.5 * K, -0.5 * p.delta} -
                                 0.5 * p.Gamma * p.Gamma * e1 * e1 / denom - 1.0i * p.chi() * r.beta;
  SteadyState s;
  s.beta = r.beta;
  s.alpha1 = std::sqrt(p.drive()) / c;
  s.alpha2 = -p.Gamma * e1 * s.alpha1 / denom;
  s.q = -p.g * r.beta / p.omega_m;
  s.p = 0.0;
  s.stable = r.stable;
  s.branch = r.branch;
  return s;
}

inline std::vector<SteadyState> steady_states(const PhysicalParams& p) {
  const auto roots = solve_intensity(coefficients(p));
  std::vector<SteadyState> out;
  out.reserve(roots.size());
  for (const auto& r : roots) out.push_back(reconstruct(p, r));
  return out;
}

enum class RegionClass { monostable, bistable_necessary, bistable_actual };

inline const char* to_string(RegionClass r) {
  switch (r) {
    case RegionClass::monostable: return "monostable";
    case RegionClass::bistable_necessary: return "bistable-necessary";
    case RegionClass::bistable_actual: return "bistable-actual";
  }
  return "?";
}

inline RegionClass region_class(const CubicCoefficients& c) {
  if (!bistable_necessary(c)) return RegionClass::monostable;
  if (c.chi > 0.0 && c.I > 0.0 && solve_intensity(c).size() == 3) return RegionClass::bistable_actual;
  return RegionClass::bistable_necessary;
}

/// Region classes over (φ, δ). `make(phi, delta)` supplies the cubic at each cell.
inline GridResult<RegionClass> bistable_region_map(
    const Axis& phi, const Axis& delta,
    const std::function<CubicCoefficients(double, double)>& make, std::size_t threads = 0) {
  phi.validate("phi");
  delta.validate("delta");
  return evaluate_grid<RegionClass>(phi, delta, threads,
                                    [&make](double f, double d) { return region_class(make(f, d)); });
}

/// Same map for a physical parameter set, sweeping its φ and δ (δ in rad/s).
inline GridResult<RegionClass> bistable_region_map(const Axis& phi, const Axis& delta,
                                                   const PhysicalParams& base, std::size_t threads = 0) {
  base.validate();
  const OpticalParams o0 = optical(base);
  const double chi = base.chi();
  const double I = base.drive();
  return bistable_region_map(
      phi, delta,
      [o0, chi, I](double f, double d) {
        OpticalParams o = o0;
        o.phi = f;
        o.delta = d;
        return coefficients(o, chi, I);
      },
      threads);
}

}  // namespace omsense
