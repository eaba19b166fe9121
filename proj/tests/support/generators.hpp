#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "omsense/omsense.hpp"

namespace omsense::testing {

/// Seeded source of random parameter sets. Every property test names its
/// seed so a failure reproduces.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  /// Γ = 1, δ ∈ [−3, 3], κ ∈ [0, 1], φ over the canonical branch. A quarter
  /// of the draws land near the exceptional points to exercise the closed form.
  OpticalParams optical() {
    OpticalParams o;
    o.Gamma = 1.0;
    o.kappa = coin() ? 0.0 : uniform(0.0, 1.0);
    o.phi = uniform(-0.999 * constants::pi, 0.999 * constants::pi);
    o.delta = uniform(-3.0, 3.0);
    if (integer(0, 3) == 0) {
      o.phi = uniform(-1e-3, 1e-3);
      o.delta = (coin() ? 1.0 : -1.0) * (1.0 + uniform(-1e-4, 1e-4));
    }
    return o;
  }

  /// Reference parameters with φ, δ, κ and the coupling drawn from the bistable neighbourhood.
  PhysicalParams physical() {
    PhysicalParams p = reference_params();
    p.kappa1 = p.kappa2 = p.Gamma * log_uniform(1e-4, 1e-2);
    p.phi = constants::pi * uniform(-0.04, 0.02);
    p.delta = p.Gamma * uniform(-0.3, 0.3);
    p.g = from_hz(uniform(0.5, 4.0));
    return p;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

}  // namespace omsense::testing
