#pragma once

// Sensitivity of the upper-branch intensity to the optomechanical coupling:
// η(φ, δ) = β(g₁)/β(g₂) with g₁ < g₂. Near the bistable window a small change
// of g moves the fold, so β jumps between branches and |ln η| becomes large.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "omsense/error.hpp"
#include "omsense/grid.hpp"
#include "omsense/params.hpp"
#include "omsense/steadystate.hpp"

namespace omsense {

struct CouplingPair {
  double g1 = from_hz(1.0);
  double g2 = from_hz(3.0);
};

enum class Region { none, I, II };

inline const char* to_string(Region r) {
  switch (r) {
    case Region::none: return "none";
    case Region::I: return "I";
    case Region::II: return "II";
  }
  return "?";
}

/// Which stable root stands for "the" intensity at a bistable point.
/// `upper` is history-free; `lower` is what a slow sweep from vacuum selects.
enum class BranchRule { upper, lower };

struct SensitivityPoint {
  double phi = 0.0;
  double delta = 0.0;
  double beta_g1 = 0.0;
  double beta_g2 = 0.0;
  double eta = 1.0;
  Region region = Region::none;
  std::size_t roots_g1 = 1;
  std::size_t roots_g2 = 1;

  double inverse_eta() const { return 1.0 / eta; }
};

namespace detail {

inline PhysicalParams with_coupling(PhysicalParams p, double g) {
  p.g = g;
  return p;
}

inline double select_beta(const std::vector<IntensityRoot>& roots, BranchRule rule) {
  const IntensityRoot* pick = nullptr;
  for (const auto& r : roots) {
    if (!r.stable) continue;
    if (!pick || (rule == BranchRule::upper ? r.beta > pick->beta : r.beta < pick->beta)) pick = &r;
  }
  if (!pick) throw NoSolution("no stable steady state");
  return pick->beta;
}

}  // namespace detail

/// Region II: g₁ is monostable while g₂ is bistable, so the small coupling
/// sits on the low branch past the fold. Region I: otherwise, with η > 1.
inline Region region_of(std::size_t roots_g1, std::size_t roots_g2, double eta) {
  if (roots_g1 == 1 && roots_g2 == 3) return Region::II;
  if (eta > 1.0) return Region::I;
  return Region::none;
}

inline SensitivityPoint sensitivity(const PhysicalParams& p, const CouplingPair& g,
                                    BranchRule rule = BranchRule::upper) {
  if (!(g.g1 <= g.g2)) throw UsageError("sensitivity: expected g1 <= g2");
  const auto r1 = solve_intensity(coefficients(detail::with_coupling(p, g.g1)));
  const auto r2 = solve_intensity(coefficients(detail::with_coupling(p, g.g2)));
  SensitivityPoint s;
  s.phi = p.phi;
  s.delta = p.delta;
  s.beta_g1 = detail::select_beta(r1, rule);
  s.beta_g2 = detail::select_beta(r2, rule);
  if (!(s.beta_g1 > 0.0) || !(s.beta_g2 > 0.0)) throw NoSolution("sensitivity needs a positive intensity for both couplings");
  s.eta = s.beta_g1 / s.beta_g2;
  s.roots_g1 = r1.size();
  s.roots_g2 = r2.size();
  s.region = region_of(s.roots_g1, s.roots_g2, s.eta);
  return s;
}

inline Region region_classify(const PhysicalParams& p, const CouplingPair& g) { return sensitivity(p, g).region; }

enum class CellStatus { ok, no_solution };

inline const char* to_string(CellStatus s) { return s == CellStatus::ok ? "ok" : "no-solution"; }

struct SensitivityCell {
  SensitivityPoint point;
  CellStatus status = CellStatus::ok;
};

/// η over (φ, δ); δ in rad/s. A cell without a stable root is flagged, not fatal.
inline GridResult<SensitivityCell> sensitivity_map(const Axis& phi, const Axis& delta, const PhysicalParams& base,
                                                   const CouplingPair& g, std::size_t threads = 0,
                                                   BranchRule rule = BranchRule::upper) {
  phi.validate("phi");
  delta.validate("delta");
  base.validate();
  return evaluate_grid<SensitivityCell>(phi, delta, threads, [&](double f, double d) {
    PhysicalParams p = base;
    p.phi = f;
    p.delta = d;
    SensitivityCell c;
    try {
      c.point = sensitivity(p, g, rule);
    } catch (const NoSolution&) {
      c.status = CellStatus::no_solution;
      c.point.phi = f;
      c.point.delta = d;
      c.point.eta = std::nan("");
    }
    return c;
  });
}

enum class Merit { eta, inverse_eta };

inline double merit_value(const SensitivityPoint& s, Merit m) { return m == Merit::eta ? s.eta : s.inverse_eta(); }

struct DetuningScan {
  double delta_min;  ///< rad/s
  double delta_max;  ///< rad/s
  std::size_t points = 2001;
};

struct Bandwidth {
  double width = 0.0;  ///< rad/s
  double lo = 0.0;
  double hi = 0.0;
  double peak_delta = 0.0;
  double peak = 0.0;
};

/// Width of the contiguous δ-window around the maximum of the merit in which
/// it stays at or above (1 − drop)·max; edges are linearly interpolated.
inline Bandwidth bandwidth(const PhysicalParams& p, const CouplingPair& g, const DetuningScan& scan,
                           double drop = 0.1, Merit merit = Merit::inverse_eta) {
  if (!(drop > 0.0 && drop < 1.0)) throw UsageError("bandwidth: drop must lie in (0, 1)");
  const Axis axis{scan.delta_min, scan.delta_max, scan.points};
  axis.validate("delta");
  std::vector<double> v(axis.points);
  for (std::size_t i = 0; i < axis.points; ++i) {
    PhysicalParams q = p;
    q.delta = axis.value(i);
    v[i] = merit_value(sensitivity(q, g), merit);
  }
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  if (*mx - *mn <= 1e-12 * std::abs(*mx)) throw UndefinedResult("bandwidth: the response is flat over the scan");
  const std::size_t k = static_cast<std::size_t>(mx - v.begin());
  const double level = (1.0 - drop) * *mx;
  std::size_t a = k, b = k;
  while (a > 0 && v[a - 1] >= level) --a;
  while (b + 1 < v.size() && v[b + 1] >= level) ++b;
  auto edge = [&](std::size_t inside, std::size_t outside) {
    const double t = (v[inside] - level) / (v[inside] - v[outside]);
    return axis.value(inside) + t * (axis.value(outside) - axis.value(inside));
  };
  Bandwidth out;
  out.lo = a > 0 ? edge(a, a - 1) : axis.value(0);
  out.hi = b + 1 < v.size() ? edge(b, b + 1) : axis.value(v.size() - 1);
  out.width = out.hi - out.lo;
  out.peak_delta = axis.value(k);
  out.peak = *mx;
  return out;
}

struct Optimum {
  double delta = 0.0;  ///< rad/s
  double eta = 1.0;
  bool degenerate = false;  ///< η is flat over the scan; delta is the window centre
};

/// argmax of η over the δ scan.
inline Optimum optimal_detuning(const PhysicalParams& p, const CouplingPair& g, const DetuningScan& scan) {
  const Axis axis{scan.delta_min, scan.delta_max, scan.points};
  axis.validate("delta");
  Optimum best;
  double lowest = std::numeric_limits<double>::infinity();
  best.eta = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < axis.points; ++i) {
    PhysicalParams q = p;
    q.delta = axis.value(i);
    const double eta = sensitivity(q, g).eta;
    lowest = std::min(lowest, eta);
    if (eta > best.eta) {
      best.eta = eta;
      best.delta = q.delta;
    }
  }
  if (best.eta - lowest <= 1e-12 * std::abs(best.eta)) {
    best.degenerate = true;
    best.delta = 0.5 * (scan.delta_min + scan.delta_max);
  }
  return best;
}

struct PhaseWindow {
  double lo;  ///< rad
  double hi;  ///< rad
};

/// The φ-interval containing `phi_seed` on which coupling g gives three
/// roots at the parameters' δ, with both edges bisected to `tol`.
/// Returns nothing when the seed itself is monostable.
inline std::optional<PhaseWindow> bistable_phase_window(const PhysicalParams& p, double g, double phi_seed,
                                                        double phi_min, double phi_max, double tol = 1e-12) {
  auto three = [&](double phi) {
    PhysicalParams q = detail::with_coupling(p, g);
    q.phi = phi;
    return solve_intensity(coefficients(q)).size() == 3;
  };
  if (!three(phi_seed)) return std::nullopt;
  auto edge = [&](double inside, double outside) {
    if (three(outside)) return outside;
    while (std::abs(outside - inside) > tol) {
      const double mid = 0.5 * (inside + outside);
      (three(mid) ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  return PhaseWindow{edge(phi_seed, phi_min), edge(phi_seed, phi_max)};
}

/// All 3-root φ-intervals for coupling g at the parameters' δ, from a scan
/// with `points` samples over [phi_min, phi_max] and bisected edges.
inline std::vector<PhaseWindow> bistable_phase_windows(const PhysicalParams& p, double g, double phi_min,
                                                       double phi_max, std::size_t points = 2001) {
  const Axis axis{phi_min, phi_max, points};
  axis.validate("phi");
  std::vector<PhaseWindow> out;
  for (std::size_t i = 0; i < axis.points; ++i) {
    const double phi = axis.value(i);
    if (!out.empty() && phi <= out.back().hi) continue;
    if (auto w = bistable_phase_window(p, g, phi, phi_min, phi_max)) out.push_back(*w);
  }
  return out;
}

struct TurningPhases {
  std::optional<double> phi1;  ///< negative edge of the g₁ 3-root window
  std::optional<double> phi2;  ///< negative edge of the g₂ 3-root window
};

/// φ₁, φ₂: the phases where the bistable windows of g₁ and g₂ close on the
/// negative-φ side, at the parameters' δ.
inline TurningPhases turning_phases(const PhysicalParams& p, const CouplingPair& g, double phi_min = -0.1 * constants::pi,
                                    double phi_max = 0.0, std::size_t points = 2001) {
  TurningPhases t;
  const auto w1 = bistable_phase_windows(p, g.g1, phi_min, phi_max, points);
  const auto w2 = bistable_phase_windows(p, g.g2, phi_min, phi_max, points);
  if (!w1.empty()) t.phi1 = w1.front().lo;
  if (!w2.empty()) t.phi2 = w2.front().lo;
  return t;
}

}  // namespace omsense
