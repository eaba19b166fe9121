#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "generators.hpp"
#include "omsense/spectrum.hpp"

using namespace omsense;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

Eigen::Matrix2cd dense(const EffectiveMatrix& m) {
  Eigen::Matrix2cd a;
  a << m.h11, m.h12, m.h21, m.h22;
  return a;
}

/// Eigen's general complex solver, matched to (λ₊, λ₋) by nearest distance.
std::pair<cplx, cplx> eigen_pair(const EffectiveMatrix& m, cplx plus) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(dense(m), false);
  cplx a = es.eigenvalues()[0], b = es.eigenvalues()[1];
  if (std::abs(a - plus) > std::abs(b - plus)) std::swap(a, b);
  return {a, b};
}

}  // namespace

TEST_CASE("matrix entries", "[spectrum]") {
  const OpticalParams o{0.3, 0.01, 1.0, 0.2};
  const auto m = effective_matrix(o);
  CHECK(m.h11 == cplx(-0.15, -0.505));
  CHECK(m.h22 == cplx(0.15, -0.505));
  CHECK_THAT(m.h12.real(), WithinAbs(0.5 * std::sin(0.2), 1e-16));
  CHECK_THAT(m.h12.imag(), WithinAbs(-0.5 * std::cos(0.2), 1e-16));
  CHECK(m.h12 == m.h21);
}

TEST_CASE("closed form agrees with direct and Eigen eigenvalues", "[spectrum][property]") {
  testing::Gen gen(21);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const auto o = gen.optical();
    const auto m = effective_matrix(o);
    const auto cf = eigenvalues_closed_form(o);
    const auto nu = eigenvalues_numeric(m);
    // Compare as unordered pairs: on the tie line the sort may legitimately differ.
    const double same = std::max(std::abs(cf.lambda_plus - nu.lambda_plus), std::abs(cf.lambda_minus - nu.lambda_minus));
    const double crossed =
        std::max(std::abs(cf.lambda_plus - nu.lambda_minus), std::abs(cf.lambda_minus - nu.lambda_plus));
    worst = std::max(worst, std::min(same, crossed));

    const auto [ea, eb] = eigen_pair(m, cf.lambda_plus);
    // Eigen's iterative solver loses √ε near an EP; the distance is bounded by that.
    const double gap = std::abs(cf.lambda_plus - cf.lambda_minus);
    const double tol = gap > 1e-3 ? 1e-12 : 1e-6;
    CHECK(std::abs(ea - cf.lambda_plus) < tol);
    CHECK(std::abs(eb - cf.lambda_minus) < tol);

    const cplx tr = cf.lambda_plus + cf.lambda_minus;
    CHECK(std::abs(tr - m.trace()) < 1e-14 * (1.0 + o.kappa + std::abs(o.delta)));
    const cplx det = cf.lambda_plus * cf.lambda_minus;
    CHECK(std::abs(det - m.det()) < 1e-13 * (1.0 + std::norm(m.trace())));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("ordering: longer-lived mode first", "[spectrum][property]") {
  testing::Gen gen(22);
  for (int i = 0; i < 10000; ++i) {
    const auto s = eigenvalues_closed_form(gen.optical());
    CHECK(s.lambda_plus.imag() >= s.lambda_minus.imag() - 1e-13);
  }
  // Below the EP at φ = 0 the imaginary parts coincide: the tie goes to larger Re.
  const auto s = eigenvalues_closed_form(OpticalParams{2.0, 0.0, 1.0, 0.0});
  CHECK_THAT(s.lambda_plus.imag(), WithinAbs(s.lambda_minus.imag(), 1e-15));
  CHECK(s.lambda_plus.real() > s.lambda_minus.real());
}

TEST_CASE("lossless zero-phase spectrum", "[spectrum]") {
  SECTION("vanishing linewidth at zero detuning") {
    const auto s = eigenvalues_closed_form(OpticalParams{0.0, 0.0, 1.0, 0.0});
    CHECK(std::abs(s.lambda_plus.imag()) <= 1e-12);
    CHECK_THAT(s.lambda_minus.imag(), WithinAbs(-1.0, 1e-15));
    CHECK_THAT(s.lambda0, WithinAbs(1.0, 1e-15));
  }
  SECTION("below the EP the pair is purely imaginary") {
    // λ = −i/2 ± (i/2)√(1 − δ²)
    for (double d : {0.1, 0.5, 0.9}) {
      const auto s = eigenvalues_closed_form(OpticalParams{d, 0.0, 1.0, 0.0});
      CHECK_THAT(s.lambda_plus.imag(), WithinAbs(-0.5 + 0.5 * std::sqrt(1.0 - d * d), 1e-14));
      CHECK_THAT(s.lambda_plus.real(), WithinAbs(0.0, 1e-14));
    }
  }
  SECTION("above the EP the pair is split in frequency") {
    for (double d : {1.5, 3.0}) {
      const auto s = eigenvalues_closed_form(OpticalParams{d, 0.0, 1.0, 0.0});
      CHECK_THAT(std::abs(s.lambda_plus.real()), WithinAbs(0.5 * std::sqrt(d * d - 1.0), 1e-14));
      CHECK_THAT(s.lambda_plus.imag(), WithinAbs(-0.5, 1e-14));
    }
  }
}

TEST_CASE("exceptional points at |delta| = Gamma", "[spectrum]") {
  const auto eps = ep_locate(OpticalParams{0.0, 0.0, 1.0, 0.0}, EpScan{-2.0, 2.0});
  REQUIRE(eps.size() == 2);
  CHECK_THAT(eps[0], WithinAbs(-1.0, 1e-6));
  CHECK_THAT(eps[1], WithinAbs(1.0, 1e-6));

  SECTION("dimensional Gamma") {
    const double G = from_hz(100e6);
    const auto e = ep_locate(OpticalParams{0.0, 0.002 * G, G, 0.0}, EpScan{-2.0 * G, 2.0 * G});
    REQUIRE(e.size() == 2);
    CHECK_THAT(e[1] / G, WithinAbs(1.0, 1e-6));
  }
  SECTION("a phase offset removes the coalescence") {
    CHECK(ep_locate(OpticalParams{0.0, 0.0, 1.0, 0.05}, EpScan{-2.0, 2.0}).empty());
  }
  SECTION("empty scan is a usage error") {
    CHECK_THROWS_AS(ep_locate(OpticalParams{}, EpScan{1.0, 1.0}), UsageError);
  }
}

TEST_CASE("linewidth suppression with phase and loss", "[spectrum]") {
  const double phi = -0.03 * std::numbers::pi;
  const auto s = eigenvalues_closed_form(OpticalParams{0.0, 0.002, 1.0, phi});
  // Exact at δ = 0: Im λ₊ = −(κ+Γ)/2 + (Γ/2)|cos φ|.
  CHECK_THAT(s.lambda_plus.imag(), WithinAbs(-0.501 + 0.5 * std::cos(phi), 1e-15));
  CHECK_THAT(s.lambda_plus.imag(), WithinRel(-3.2e-3, 0.05));
  CHECK_THAT(s.lambda_plus.imag(), WithinRel(linewidth_suppression_approx(0.002, 1.0, phi), 0.05));
}

TEST_CASE("the closed form depends on phase only through 2 Phi", "[spectrum][property]") {
  testing::Gen gen(23);
  for (int i = 0; i < 1000; ++i) {
    auto o = gen.optical();
    const auto a = eigenvalues_closed_form(o);
    o.phi = o.phi > 0 ? o.phi - std::numbers::pi : o.phi + std::numbers::pi;
    const auto b = eigenvalues_closed_form(o);
    CHECK(std::abs(a.lambda_plus - b.lambda_plus) < 1e-12);
    CHECK(std::abs(a.lambda_minus - b.lambda_minus) < 1e-12);
  }
}

TEST_CASE("invalid Gamma is a domain error", "[spectrum]") {
  CHECK_THROWS_AS(eigenvalues_closed_form(OpticalParams{0.0, 0.0, 0.0, 0.0}), DomainError);
}
