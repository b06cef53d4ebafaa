#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "liouville/background.hpp"
#include "liouville/error.hpp"

using namespace liouville;

namespace {

SolverSettings with_grid(int n) {
  SolverSettings s;
  s.grid = n;
  return s;
}

}  // namespace

TEST(BuildBeta, ThreeEllipticMass) {
  const auto cfg = fixtures::three_elliptic();
  const auto beta = build_beta(cfg, with_grid(128));
  const double target = 4.0 * std::numbers::pi * 0.7;
  EXPECT_NEAR(beta.mass, target, 1e-10 * target);
  // cell averages of the (R/ρ)⁴ tail carry an O(h⁴) quadrature error
  EXPECT_NEAR(field_integral(beta.cells), target, 1e-8 * target);
  const auto fine = build_beta(cfg, with_grid(256));
  EXPECT_NEAR(field_integral(fine.cells), target, 1e-10 * target);
  EXPECT_GT(beta.plateau, 0.0);
}

TEST(BuildBeta, ThreeParabolicShrinksCores) {
  const auto cfg = fixtures::three_parabolic();
  const auto beta = build_beta(cfg, with_grid(128));
  const double target = 4.0 * std::numbers::pi;
  EXPECT_NEAR(beta.mass, target, 1e-10 * target);
  EXPECT_NEAR(field_integral(beta.cells), target, 1e-10 * target);
  EXPECT_LE(beta.fixed_parabolic_mass, 0.9 * target);
  for (const auto& p : beta.patches) {
    ASSERT_EQ(p.kind, SourceKind::Parabolic);
    EXPECT_LT(p.core_radius, std::exp(-3.0));
    // exactly the cusp density in the core
    const double rho = 0.5 * p.core_radius;
    const double l = std::log(rho * rho);
    EXPECT_NEAR(beta(p.center + Complex{0.0, rho}), 8.0 / (rho * rho * l * l), 1e-12 * 8.0 / (rho * rho * l * l));
  }
}

TEST(BuildBeta, CuspCoreMassIsEightPiOverLog) {
  // ∫₀^ρ 8·2πs ds/(s² log² s²) = 8π/|log ρ²|
  const auto beta = build_beta(fixtures::three_parabolic(), with_grid(64));
  const auto& p = beta.patches.front();
  const double a = p.core_radius;
  const int n = 200000;
  // substitution t = −1/log s², s = exp(−1/2t), ds = s dt/(2t²)
  const double tmax = -1.0 / std::log(a * a);
  auto integrand = [](double t) {
    // f(s)·s ds with f = 8/(s² l²), l = log s² = −1/t; the powers of s cancel
    const double l = -1.0 / t;
    return 2.0 * std::numbers::pi * 8.0 / (l * l) / (2.0 * t * t);
  };
  const double ref = boost::math::quadrature::gauss<double, 20>::integrate(integrand, 0.0, tmax);
  EXPECT_NEAR(2.0 * std::numbers::pi * p.shape.cumulative(a), ref, 1e-12);
  EXPECT_NEAR(ref, 8.0 * std::numbers::pi / std::abs(std::log(a * a)), 1e-12);
}

TEST(BuildBeta, PositiveEverywhere) {
  const auto beta = build_beta(fixtures::three_elliptic(), with_grid(64));
  std::mt19937_64 rng(3);
  const double rc = -beta.grid.origin.real();
  std::uniform_real_distribution<double> u(-rc, rc);
  int bad = 0;
  for (int k = 0; k < 100000; ++k) {
    const double b = beta(Complex{u(rng), u(rng)});
    if (!(b > 0.0) || !std::isfinite(b)) ++bad;
  }
  EXPECT_EQ(bad, 0);
}

TEST(BuildBeta, BoundConstants) {
  const auto beta = build_beta(fixtures::three_elliptic(), with_grid(64));
  for (const auto& [lo, hi] : beta.patch_bounds(1000)) {
    EXPECT_GT(lo, 0.0);
    EXPECT_TRUE(std::isfinite(hi));
  }
  const double r = beta.outer_radius;
  for (double rho : {1.01 * r, 2.0 * r, 3.5 * r}) {
    EXPECT_NEAR(beta(std::polar(rho, 0.3)) * std::pow(rho, 4), beta.plateau * std::pow(r, 4),
                1e-12 * beta.plateau * std::pow(r, 4));
  }
}

TEST(BuildBeta, RandomConfigsNormalized) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-2.0, 2.0), eta(0.05, 0.49);
  for (int trial = 0; trial < 8; ++trial) {
    SourceConfiguration c;
    const int ne = 3 + trial % 3;
    for (int k = 0; k < ne; ++k) c.elliptic.push_back({Complex{pos(rng), pos(rng)}, eta(rng)});
    if (trial % 2) c.parabolic.push_back({Complex{pos(rng), pos(rng)}});
    if (c.topological_excess() <= 0.0) continue;
    const auto beta = build_beta(c, with_grid(64));
    const double target = target_beta_mass(c);
    EXPECT_NEAR(beta.mass, target, 1e-10 * target);
  }
}

TEST(Phi1, Examples) {
  SourceConfiguration c;
  c.elliptic.push_back({Complex{0.0, 0.0}, 0.25});
  EXPECT_EQ(phi1(c, Complex{1.0, 0.0}), 0.0);
  EXPECT_NEAR(phi1(c, Complex{2.0, 0.0}), -0.5 * std::log(4.0), 1e-15);
  EXPECT_THROW((void)phi1(c, Complex{0.0, 0.0}), Error);
  SourceConfiguration p;
  p.parabolic.push_back({Complex{0.0, 0.0}});
  EXPECT_NEAR(phi1(p, Complex{std::exp(1.0), 0.0}), -2.0, 1e-15);
}

TEST(W0, Examples) {
  EXPECT_EQ(w0(build_beta(fixtures::three_elliptic(), with_grid(32)), Complex{0.3, 0.1}), 0.0);
  SourceConfiguration c;
  for (double x : {-3.0, 0.0, 3.0}) c.parabolic.push_back({Complex{x, 0.0}});
  const auto beta = build_beta(c, with_grid(32));
  const auto& p = beta.patches[1];
  ASSERT_GT(p.core_radius, 0.01);
  EXPECT_NEAR(w0(beta, Complex{0.01, 0.0}), -std::log(std::pow(std::log(1e-4), 2)), 1e-12);
  EXPECT_NEAR(w0(beta, Complex{0.01, 0.0}), -4.4403, 1e-3);
  EXPECT_EQ(w0(beta, Complex{0.0, 3.0 * p.core_radius}), 0.0);
}

TEST(ParabolicPotentialDensity, MassBalancesLaplacianOfW0) {
  // ∫Δw₀ = 0, so the density carries the cusp mass minus the removed plateau
  const auto beta = build_beta(fixtures::three_parabolic(), with_grid(32));
  for (const auto& p : beta.patches) {
    const auto q = parabolic_potential_density(p, beta.plateau);
    EXPECT_NEAR(q.mass(), p.shape.mass() - beta.plateau * p.hole.mass(), 1e-10);
  }
}

TEST(BuildBackground, EllipticRBoundsAndLaplacian) {
  auto beta = std::make_shared<const BetaDensity>(build_beta(fixtures::three_elliptic(), with_grid(256)));
  const auto bg = build_background(beta, with_grid(256));
  EXPECT_GT(bg.lambda1, 0.0);
  EXPECT_TRUE(std::isfinite(bg.lambda2));
  EXPECT_LE(bg.lambda1, bg.lambda2);
  // with the log singularities removed analytically, the 5-point Laplacian
  // of what remains reproduces the smooth bulk b·base
  const Grid& g = bg.grid();
  const double h = g.spacing;
  auto smooth = [&](int i, int j) {
    const Complex z = g.center(i, j);
    double d = bg.v.at(i, j) - phi1(beta->config, z);
    for (const auto& p : beta->patches) d -= beta->plateau * p.shape.potential(std::abs(z - p.center));
    return d;
  };
  double worst = 0.0, scale = 0.0;
  for (int j = 2; j < g.ny - 2; ++j) {
    for (int i = 2; i < g.nx - 2; ++i) {
      const Complex z = g.center(i, j);
      bool near = false;
      for (const auto& p : beta->patches) near = near || std::abs(z - p.center) < p.radius + 3 * h;
      if (near) continue;
      const double lap = (smooth(i + 1, j) + smooth(i - 1, j) + smooth(i, j + 1) + smooth(i, j - 1) -
                          4.0 * smooth(i, j)) / (h * h);
      const double bulk = beta->plateau * beta->base.value(std::abs(z));
      worst = std::max(worst, std::abs(lap - bulk));
      scale = std::max(scale, bulk);
    }
  }
  EXPECT_LT(worst, 0.02 * scale);
  // v − φ₁ finite at the patch boundary; off-grid v agrees with the snapshot
  for (const auto& p : beta->patches) {
    const Complex z = p.center + std::polar(p.radius, 0.7);
    EXPECT_TRUE(std::isfinite(bg.v_at(z) - phi1(beta->config, z)));
  }
  EXPECT_NEAR(bg.v_at(g.center(100, 77)), bg.v.at(100, 77), 1e-10);
}

TEST(BuildBackground, FarFieldDecay) {
  auto beta = std::make_shared<const BetaDensity>(build_beta(fixtures::three_elliptic(), with_grid(256)));
  const auto bg = build_background(beta, with_grid(256));
  const double rc = -beta->grid.origin.real();
  for (double ang : {0.0, 0.5 * std::numbers::pi, 0.3}) {
    auto comp = [&](double rho) {
      const Complex z = std::polar(rho, ang);
      return bg.v_at(z) + 2.0 * std::log(std::norm(z));
    };
    EXPECT_LT(std::abs(comp(0.99 * rc) - comp(0.9 * rc)), 0.1);
  }
}

TEST(BuildBackground, ParabolicRBounds) {
  auto beta = std::make_shared<const BetaDensity>(build_beta(fixtures::three_parabolic(), with_grid(256)));
  const auto bg = build_background(beta, with_grid(256));
  EXPECT_GT(bg.lambda1, 0.0);
  EXPECT_TRUE(std::isfinite(bg.lambda2));
  // r stays bounded approaching the cusp
  for (const auto& p : beta->patches) {
    for (double rho : {1e-3 * p.core_radius, 1e-6 * p.core_radius}) {
      const double r = bg.r_at(p.center + std::polar(rho, 1.1));
      EXPECT_GT(r, 0.5 * bg.lambda1);
      EXPECT_LT(r, 2.0 * bg.lambda2);
    }
  }
}

TEST(SingularCellIntegral, ConeWeightOnSquares) {
  // ∫ |z|^(−4η) over squares around, touching and away from the origin
  Patch p;
  p.kind = SourceKind::Elliptic;
  p.eta = 0.45;
  auto log_f = [&](Complex z) { return -2.0 * p.eta * std::log(std::norm(z)); };
  using GL = boost::math::quadrature::gauss<double, 30>;
  const double e = 2.0 - 4.0 * p.eta;
  // centred square of half-width a: 8 ∫_0^{π/4} (a / cos θ)^e / e dθ
  const double a = 0.3;
  const double centred = 8.0 * GL::integrate([&](double t) { return std::pow(a / std::cos(t), e) / e; }, 0.0,
                                             std::numbers::pi / 4.0);
  EXPECT_NEAR(singular_cell_integral(log_f, p, {0.0, 0.0}, -a, a, -a, a), centred, 1e-10 * centred);
  // source on a corner: a quarter of the centred square
  EXPECT_NEAR(singular_cell_integral(log_f, p, {0.0, 0.0}, 0.0, a, 0.0, a), 0.25 * centred, 1e-10 * centred);
  // source outside: smooth integrand, tensor Gauss–Legendre
  const double x0 = 0.1, x1 = 0.4, y0 = -0.2, y1 = 0.1;
  const double tensor = GL::integrate(
      [&](double x) { return GL::integrate([&](double y) { return std::exp(log_f({x, y})); }, y0, y1); }, x0, x1);
  EXPECT_NEAR(singular_cell_integral(log_f, p, {0.0, 0.0}, x0, x1, y0, y1), tensor, 1e-8 * tensor);
}

TEST(SingularCellIntegral, ReproducesBetaCellAverages) {
  const auto beta = build_beta(fixtures::three_parabolic(), with_grid(128));
  const Grid& g = beta.grid;
  for (const auto& p : beta.patches) {
    for (int di = -2; di <= 1; ++di) {
      for (int dj = -2; dj <= 1; ++dj) {
        const int i = static_cast<int>(std::floor((p.center.real() - g.origin.real()) / g.spacing)) + di;
        const int j = static_cast<int>(std::floor((p.center.imag() - g.origin.imag()) / g.spacing)) + dj;
        const Complex z = g.center(i, j);
        const double hh = 0.5 * g.spacing;
        const double fan = singular_cell_integral([&](Complex w) { return beta.log_value(w); }, p, p.center,
                                                  z.real() - hh, z.real() + hh, z.imag() - hh, z.imag() + hh);
        const double cell = beta.cells.at(i, j) * g.cell_area();
        EXPECT_NEAR(fan, cell, 1e-6 * cell);
      }
    }
  }
}
