#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "liouville/solve.hpp"
#include "liouville/verify.hpp"

using namespace liouville;

namespace {

constexpr double kPi = std::numbers::pi;

SolverSettings with_grid(int n) {
  SolverSettings s;
  s.grid = n;
  return s;
}

const Solution& torus128() {
  static const Solution sol = solve(fixtures::torus_one_elliptic(), with_grid(128), Method::Variational);
  return sol;
}

const Solution& sphere128() {
  static const Solution sol = solve(fixtures::three_elliptic(), with_grid(128), Method::Picard);
  return sol;
}

// h-weighted L² norm of e^φ for the cone metric on the oracle's annulus
double cone_metric_norm(double mu, int n) {
  const double h = 1.6 / n;
  double acc = 0.0;
  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      const double x = -0.8 + (i + 0.5) * h, y = -0.8 + (j + 0.5) * h;
      const double r = std::hypot(x, y);
      if (r < 0.2 || r > 0.8) continue;
      const double e = 8.0 * mu * mu * std::pow(r, 2.0 * mu - 2.0) / std::pow(1.0 - std::pow(r, 2.0 * mu), 2);
      acc += e * e * h * h;
    }
  }
  return std::sqrt(acc);
}

}  // namespace

TEST(ConeOracle, SecondOrderConvergence) {
  for (double mu : {1.0, 0.6}) {
    double prev = cone_oracle(mu, 64);
    for (int n : {128, 256, 512}) {
      const double r = cone_oracle(mu, n);
      EXPECT_GE(prev / r, 3.2) << "mu " << mu << " n " << n;
      EXPECT_LE(prev / r, 4.8) << "mu " << mu << " n " << n;
      prev = r;
    }
  }
}

TEST(ConeOracle, ConstantShiftShowsUp) {
  const double base = cone_oracle(0.6, 256);
  const double shifted = cone_oracle(0.6, 256, 0.01);
  // Δ(const) = 0 and e^{φ+c} − e^φ = (e^c − 1) e^φ
  const double expected = std::expm1(0.01) * cone_metric_norm(0.6, 256);
  EXPECT_NEAR(shifted, expected, base + 1e-3 * expected);
  EXPECT_GT(shifted, 10.0 * base);
}

TEST(ConeOracle, RejectsBadExponent) {
  EXPECT_THROW((void)cone_oracle(0.0, 64), Error);
  EXPECT_THROW((void)cone_oracle(1.2, 64), Error);
  EXPECT_THROW((void)cone_oracle(-0.5, 64), Error);
}

TEST(CheckArea, TorusGaussBonnet) {
  const auto a = check_area(torus128());
  EXPECT_NEAR(a.target, 2.0 * kPi, 1e-12);
  EXPECT_LT(a.relative_error(), 0.02);
}

TEST(CheckArea, ThreeEllipticGaussBonnet) {
  const auto a = check_area(sphere128());
  EXPECT_NEAR(a.target, 4.0 * kPi * 0.7, 1e-12);
  EXPECT_LT(a.relative_error(), 0.05);
}

TEST(CheckResidual, ConvergedAndSensitive) {
  const auto& sol = sphere128();
  const auto& bg = *sol.background;
  const double converged = check_residual(sol);
  EXPECT_LE(converged, 10.0 * 1e-8);

  Solution bumped = sol;
  for (auto& x : bumped.U.values()) x += 0.1;
  // first order: the defect gains (e^0.1 − 1) r β̄ e^U on the measured cells
  double num = 0.0, den = 0.0;
  const Grid& g = sol.grid();
  for (int j = 1; j < g.ny - 1; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      const std::size_t k = g.index(i, j);
      if (bg.residual_mask[k] == 0) continue;
      num += std::pow(bg.r[k] * bg.beta_cells()[k] * std::exp(sol.U[k]), 2);
      den += std::pow(bg.beta_cells()[k], 2);
    }
  }
  EXPECT_GE(check_residual(bumped) - converged, 0.05 * std::sqrt(num / den));
}

TEST(CheckResidual, ManufacturedSecondOrder) {
  // Δ_h U* − ΔU* for U* = 0.3 sin 2πx cos 2πy on the unit torus
  auto defect_norm = [](int n) {
    const auto bg = make_background(fixtures::torus_one_elliptic(), with_grid(n));
    const Grid& g = bg->grid();
    ScalarField U(g), exact(g);
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const Complex z = g.center(i, j);
        const double s = 0.3 * std::sin(2.0 * kPi * z.real()) * std::cos(2.0 * kPi * z.imag());
        U.at(i, j) = s;
        const double b = bg->beta_cells().at(i, j);
        exact.at(i, j) = -8.0 * kPi * kPi * s + b - bg->r.at(i, j) * b * std::exp(s);
      }
    }
    ScalarField d = pde_defect(U, *bg);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] -= exact[k];
    return relative_residual(d, *bg);
  };
  const double ratio = defect_norm(128) / defect_norm(256);
  EXPECT_GE(ratio, 3.2);
  EXPECT_LE(ratio, 4.8);
}

TEST(CheckAsymptotics, TorusSlopeMatchesConeAngle) {
  const auto a = check_asymptotics(torus128());
  ASSERT_EQ(a.sources.size(), 1u);
  EXPECT_NEAR(a.sources[0].fitted_slope, -0.5, 0.02);
  EXPECT_FALSE(a.far_field_drift.has_value());
}

TEST(CheckAsymptotics, SphereFarFieldAndSlopes) {
  const auto a = check_asymptotics(sphere128());
  ASSERT_EQ(a.sources.size(), 3u);
  for (const auto& s : a.sources) {
    EXPECT_TRUE(s.elliptic);
    EXPECT_DOUBLE_EQ(s.expected_slope, -0.9);
    EXPECT_NEAR(s.fitted_slope, -0.9, 0.02);
    EXPECT_LT(s.inner_radius, s.outer_radius);
  }
  ASSERT_TRUE(a.far_field_drift.has_value());
  EXPECT_LT(*a.far_field_drift, 0.1);
}

TEST(Uniqueness, IdenticalSolutionsHaveNoGap) {
  const auto p = compare_solutions(torus128(), torus128());
  EXPECT_EQ(p.spread, 0.0);
  EXPECT_EQ(p.gap, 0.0);
  EXPECT_EQ(p.monotonicity_violations, 0);
  EXPECT_GT(p.energy_scale, 0.0);
}

TEST(Uniqueness, MonotonicityHoldsCellwise) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 3.0);
  Solution a = torus128(), b = torus128();
  for (std::size_t k = 0; k < a.U.size(); ++k) {
    a.U[k] = n(rng);
    b.U[k] = n(rng);
  }
  EXPECT_EQ(compare_solutions(a, b).monotonicity_violations, 0);
}

TEST(Uniqueness, TorusProbeConverges) {
  const auto settings = with_grid(64);
  const auto bg = make_background(fixtures::torus_one_elliptic(), settings);
  const auto p = uniqueness_probe(bg, settings, 3);
  EXPECT_EQ(p.solutions.size(), 3u);
  EXPECT_LT(p.spread, 100.0 * settings.tolerance);
  EXPECT_LT(p.gap, 1e-4 * p.energy_scale);
  EXPECT_EQ(p.monotonicity_violations, 0);
}

TEST(Verify, ReportFlagsFollowThresholds) {
  const auto settings = with_grid(128);
  const auto rep = verify(torus128(), settings);
  EXPECT_TRUE(rep.pass());
  for (const auto& c : rep.checks) {
    EXPECT_TRUE(std::isfinite(c.value));
    EXPECT_EQ(c.pass, c.value <= c.threshold) << c.name;
  }
  Thresholds strict;
  strict.area = 0.0;
  const auto failing = verify(torus128(), settings, nullptr, strict);
  EXPECT_FALSE(failing.pass());
}

TEST(Verify, FunctionalBoundsOnSolution) {
  const auto b = check_functional_bounds(torus128());
  EXPECT_TRUE(b.holds());
  EXPECT_LE(b.at_solution, b.at_zero);
}
