#pragma once

/// Dimensional system parameters, unit conversions and the reduction to
/// the Γ-scaled parameter set used by every solver.
///
/// All rates are angular frequencies (rad/s). Helpers `from_hz` convert
/// ordinary frequencies with the explicit 2π.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "omsense/error.hpp"

namespace omsense {

namespace constants {
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
/// Reduced Planck constant [J s] (CODATA 2018, exact by SI definition of h).
inline constexpr double hbar = 1.054571817e-34;
/// Speed of light in vacuum [m/s], exact.
inline constexpr double c = 299792458.0;
/// Mechanical relaxation rate ω_m²/γ_m, in units of Γ, below which the
/// mechanics follows the optics adiabatically (see default_mechanical_damping).
inline constexpr double adiabatic_relaxation = 1e-6;
}  // namespace constants

inline constexpr double from_hz(double f) { return constants::two_pi * f; }
inline constexpr double to_hz(double w) { return w / constants::two_pi; }

/// ω = 2πc/λ.
inline double wavelength_to_angular_frequency(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("wavelength must be positive");
  return constants::two_pi * constants::c / lambda;
}

/// Drive intensity I = Ω² = P_in κ₁ / (ħ ω_d), in s⁻².
inline double drive_intensity(double power, double kappa1, double omega_d) {
  if (!(power >= 0.0)) throw DomainError("input power must be non-negative");
  if (!(kappa1 >= 0.0)) throw DomainError("kappa1 must be non-negative");
  if (!(omega_d > 0.0)) throw DomainError("drive frequency must be positive");
  return power * kappa1 / (constants::hbar * omega_d);
}

/// Optomechanically induced Kerr coefficient χ = g²/ω_m.
inline double kerr_coefficient(double g, double omega_m) {
  if (!(omega_m > 0.0)) throw DomainError("omega_m must be positive");
  return g * g / omega_m;
}

/// Default mechanical damping: overdamped so that the slow mechanical
/// relaxation rate ω_m²/γ_m equals 1e-6 Γ, well below the narrowest optical
/// linewidth of interest (κ/2 down to ~5e-5 Γ). In this regime the 6x6
/// mean-field Jacobian and the static dI/dβ rule agree; with faster or weakly
/// damped mechanics the upper branch can lose stability to dynamical backaction.
inline double default_mechanical_damping(double Gamma, double omega_m) {
  if (!(Gamma > 0.0) || !(omega_m > 0.0))
    throw DomainError("Gamma and omega_m must be positive");
  return omega_m * omega_m / (constants::adiabatic_relaxation * Gamma);
}

struct PhysicalParams {
  double Gamma = from_hz(100e6);  ///< waveguide-induced rate Γ
  double kappa1 = 0.0;            ///< intrinsic decay of the optomechanical cavity
  double kappa2 = 0.0;            ///< intrinsic decay of the auxiliary cavity
  double delta = 0.0;             ///< cavity detuning δ
  double phi = 0.0;               ///< propagation phase deviation, Φ = 2nπ + φ
  double omega_m = from_hz(10e3);
  double gamma_m = 0.0;
  double g = 0.0;                 ///< single-photon optomechanical coupling
  double P_in = 0.0;              ///< input power [W]
  double lambda_d = 1550e-9;      ///< drive wavelength [m]

  double kappa() const { return 0.5 * (kappa1 + kappa2); }
  double omega_d() const { return wavelength_to_angular_frequency(lambda_d); }
  double drive() const { return drive_intensity(P_in, kappa1, omega_d()); }
  double chi() const { return kerr_coefficient(g, omega_m); }

  void validate() const {
    auto require = [](bool ok, const char* msg) {
      if (!ok) throw DomainError(msg);
    };
    require(Gamma > 0.0 && std::isfinite(Gamma), "Gamma must be positive");
    require(kappa1 >= 0.0 && kappa2 >= 0.0, "kappa1, kappa2 must be non-negative");
    require(std::isfinite(delta), "delta must be finite");
    require(std::abs(phi) < constants::pi, "phi must lie on the canonical branch |phi| < pi");
    require(omega_m > 0.0, "omega_m must be positive");
    require(gamma_m >= 0.0, "gamma_m must be non-negative");
    require(g >= 0.0, "g must be non-negative");
    require(P_in >= 0.0, "P_in must be non-negative");
    require(lambda_d > 0.0, "lambda_d must be positive");
  }
};

/// Reference operating point: Γ/2π = 100 MHz,
/// ω_m/2π = 10 kHz, κ/Γ = 2e-3, P_in = 8.06 mW at 1550 nm, g/2π = 1 Hz,
/// resonant (δ = 0) and dissipatively coupled (φ = 0).
inline PhysicalParams reference_params() {
  PhysicalParams p;
  p.Gamma = from_hz(100e6);
  p.kappa1 = p.kappa2 = 2e-3 * p.Gamma;
  p.omega_m = from_hz(10e3);
  p.gamma_m = default_mechanical_damping(p.Gamma, p.omega_m);
  p.g = from_hz(1.0);
  p.P_in = 8.06e-3;
  p.lambda_d = 1550e-9;
  return p;
}

/// Move the mechanical frequency while holding χ = g²/ω_m fixed, so the
/// steady state is unchanged and only the timescale separation Γ/ω_m
/// moves. γ_m is reset to the adiabatic default for the new ω_m.
inline PhysicalParams with_mechanical_frequency(PhysicalParams p, double omega_m) {
  const double chi = p.chi();
  p.omega_m = omega_m;
  p.g = std::sqrt(chi * omega_m);
  p.gamma_m = default_mechanical_damping(p.Gamma, omega_m);
  return p;
}

/// Dimensionless parameters in units of Γ; the canonical solver input.
struct ReducedParams {
  double d = 0.0;        ///< δ/Γ
  double k = 0.0;        ///< κ/Γ
  double phi = 0.0;      ///< φ [rad]
  double chi_t = 0.0;    ///< χ/Γ
  double drive_t = 0.0;  ///< Iχ/Γ³

  void validate() const {
    if (!(k >= 0.0)) throw DomainError("k must be non-negative");
    if (!(chi_t >= 0.0)) throw DomainError("chi_t must be non-negative");
    if (!(drive_t >= 0.0)) throw DomainError("drive_t must be non-negative");
    if (!std::isfinite(d) || !std::isfinite(phi)) throw DomainError("d and phi must be finite");
  }
};

inline ReducedParams reduce(const PhysicalParams& p) {
  p.validate();
  if (p.kappa1 != p.kappa2)
    throw UnsupportedConfiguration("kappa1 != kappa2: the two-cavity model assumes identical decay rates");
  const double G = p.Gamma;
  const double chi = p.chi();
  ReducedParams r;
  r.d = p.delta / G;
  r.k = p.kappa1 / G;
  r.phi = p.phi;
  r.chi_t = chi / G;
  r.drive_t = p.drive() * chi / (G * G * G);
  return r;
}

/// Dimensional (δ, κ, χ, I) recovered from a ReducedParams and Γ.
/// When χ = 0 the drive cannot be recovered from drive_t and I is NaN.
struct DimensionalRates {
  double delta;
  double kappa;
  double chi;
  double I;
};

inline DimensionalRates inflate(const ReducedParams& r, double Gamma) {
  if (!(Gamma > 0.0)) throw DomainError("Gamma must be positive");
  const double chi = r.chi_t * Gamma;
  const double I = chi > 0.0 ? r.drive_t * Gamma * Gamma * Gamma / chi
                             : std::numeric_limits<double>::quiet_NaN();
  return {r.d * Gamma, r.k * Gamma, chi, I};
}

/// Inputs of the emitter-mediated coupling of a levitated nanosphere.
struct NanosphereParams {
  long N = 1;            ///< number of emitters
  double p_e = 0.0;      ///< steady excited-state population
  double Omega_c = 0.0;  ///< emitter-cavity coupling at the trap distance [rad/s]
  double Delta_c = 0.0;  ///< emitter-cavity detuning [rad/s]
  double gamma_c = 0.0;  ///< evanescent-field decay constant [1/m]
  double q_zpf = 0.0;    ///< mechanical zero-point motion [m]

  void validate() const {
    if (N < 1) throw DomainError("N must be a positive integer");
    if (!(p_e >= 0.0 && p_e <= 1.0)) throw DomainError("p_e must lie in [0, 1]");
    if (Delta_c == 0.0) throw DomainError("Delta_c must be non-zero");
    if (!std::isfinite(Omega_c) || !std::isfinite(Delta_c) || !std::isfinite(gamma_c) ||
        !std::isfinite(q_zpf))
      throw DomainError("nanosphere parameters must be finite");
  }
};

/// Signed single-photon coupling g = −√2 N (2p_e − 1) Ω_c²/(2Δ_c) γ_c q_zpf.
inline double nanosphere_coupling(const NanosphereParams& p) {
  p.validate();
  return -std::numbers::sqrt2 * static_cast<double>(p.N) * (2.0 * p.p_e - 1.0) *
         (p.Omega_c * p.Omega_c / (2.0 * p.Delta_c)) * p.gamma_c * p.q_zpf;
}

/// Emitter count of a sphere of radius R [m] at emitter density rho [1/m³], rounded.
inline long emitter_count(double rho, double radius) {
  if (!(rho >= 0.0) || !(radius > 0.0)) throw DomainError("density and radius must be positive");
  const double n = rho * 4.0 / 3.0 * constants::pi * radius * radius * radius;
  return std::max(1L, std::lround(n));
}

/// Zero-point motion √(ħ / 2 m ω_m) of a mechanical oscillator of mass m [kg].
inline double zero_point_motion(double mass, double omega_m) {
  if (!(mass > 0.0) || !(omega_m > 0.0)) throw DomainError("mass and omega_m must be positive");
  return std::sqrt(constants::hbar / (2.0 * mass * omega_m));
}

}  // namespace omsense
