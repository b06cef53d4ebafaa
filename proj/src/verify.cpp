#include "liouville/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>

#include "liouville/radial.hpp"
#include "liouville/solve.hpp"
#include "liouville/variational.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kAngles = 64;

// Radius of the disk split off around a patch: 0.45 of the distance to the
// nearest other source (or lattice image), at most 0.5.
double near_radius(const Solution& sol, const Patch& p) {
  const auto& cfg = sol.config();
  double nearest = std::numeric_limits<double>::infinity();
  for (const auto& q : sol.background->beta->patches) {
    if (&q == &p) continue;
    nearest = std::min(nearest, chart_distance(cfg, p.center, q.center));
  }
  if (cfg.genus == 1) nearest = std::min({nearest, cfg.periods[0].real(), cfg.periods[1].imag()});
  return std::min(0.45 * nearest, 0.5);
}

// 1 on [0, a/2], C∞ descent to 0 at a.
double disk_weight(double rho, double a) {
  if (rho <= 0.5 * a) return 1.0;
  if (rho >= a) return 0.0;
  return 1.0 - bumpstep((rho - 0.5 * a) / (0.5 * a));
}

double ring_mean(const Solution& sol, Complex c, double rho, auto&& f) {
  std::array<double, kAngles> t{};
  for (int k = 0; k < kAngles; ++k) {
    const double th = 2.0 * kPi * (k + 0.5) / kAngles;
    t[k] = f(sol.phi_at(c + std::polar(rho, th)), rho);
  }
  return pairwise_sum(t) / kAngles;
}

// ∫_{|ζ|<a} w(|ζ|) e^φ in polar form with the singular weight substituted away.
// U is read bilinearly: the scheme holds e^U constant over the source cells,
// and a cubic reconstruction overshoots the peak U has there.
double disk_integral(const Solution& sol, const Patch& p, double a) {
  using GL = boost::math::quadrature::gauss<double, 40>;
  const SingularRadial sr(p);
  auto radial = [&](double s) {
    const double rho = sr.rho_of(s);
    std::array<double, kAngles> t{};
    for (int k = 0; k < kAngles; ++k) {
      const double th = 2.0 * kPi * (k + 0.5) / kAngles;
      const Complex z = p.center + std::polar(rho, th);
      t[k] = std::exp(sol.background->v_at(z) + interpolate_bilinear(sol.U, z) - sr.log_weight(rho));
    }
    return disk_weight(rho, a) * sr.jacobian() * 2.0 * kPi * pairwise_sum(t) / kAngles;
  };
  const double s_half = sr.s_of(0.5 * a);
  return GL::integrate(radial, 0.0, s_half) + GL::integrate(radial, s_half, sr.s_of(a));
}

double sup_difference(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

// Σ over edges of the squared difference (h² |∇d|² with unit edge length)
double edge_energy(const ScalarField& d) {
  const Grid& g = d.grid();
  std::vector<double> t;
  t.reserve(2 * g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.periodic || i + 1 < g.nx) t.push_back(std::pow(d.at((i + 1) % g.nx, j) - d.at(i, j), 2));
      if (g.periodic || j + 1 < g.ny) t.push_back(std::pow(d.at(i, (j + 1) % g.ny) - d.at(i, j), 2));
    }
  }
  return pairwise_sum(t);
}

// Smooth start with sup = L·amplitude: a few seeded low Fourier modes.
ScalarField random_start(const Grid& g, double L, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ScalarField f(g);
  for (int m = 0; m < 4; ++m) {
    const int kx = 1 + static_cast<int>(u(rng) * 3.0), ky = 1 + static_cast<int>(u(rng) * 3.0);
    const double px = 2.0 * kPi * u(rng), py = 2.0 * kPi * u(rng), amp = 2.0 * u(rng) - 1.0;
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        f.at(i, j) += amp * std::cos(2.0 * kPi * kx * (i + 0.5) / g.nx + px) *
                      std::cos(2.0 * kPi * ky * (j + 0.5) / g.ny + py);
      }
    }
  }
  const double m = f.max_abs();
  const double scale = m > 0.0 ? (0.25 + 0.75 * u(rng)) * L / m : 0.0;
  for (auto& x : f.values()) x *= scale;
  return f;
}

}  // namespace

AreaCheck check_area(const Solution& sol) {
  const Grid& g = sol.grid();
  const auto& patches = sol.background->beta->patches;
  std::vector<double> radii;
  for (const auto& p : patches) radii.push_back(near_radius(sol, p));

  std::vector<double> terms;
  terms.reserve(g.size() + patches.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z = g.center(i, j);
      double w = 1.0;
      for (std::size_t s = 0; s < patches.size(); ++s) {
        w -= disk_weight(std::abs(sol.background->beta->displacement(z, patches[s].center)), radii[s]);
      }
      if (w <= 0.0) continue;
      const std::size_t k = g.index(i, j);
      terms.push_back(w * std::exp(sol.background->v[k] + sol.U[k]) * g.cell_area());
    }
  }
  for (std::size_t s = 0; s < patches.size(); ++s) terms.push_back(disk_integral(sol, patches[s], radii[s]));
  return {pairwise_sum(terms), target_beta_mass(sol.config())};
}

double check_residual(const Solution& sol) {
  return relative_residual(pde_defect(sol.U, *sol.background), *sol.background);
}

Asymptotics check_asymptotics(const Solution& sol) {
  const Grid& g = sol.grid();
  Asymptotics out;
  constexpr int kFitRings = 33;
  constexpr double kFitDecades = 1e-8;
  for (const auto& p : sol.background->beta->patches) {
    SourceAsymptotics a;
    a.elliptic = p.kind == SourceKind::Elliptic;
    a.outer_radius = 0.5 * p.radius;
    a.inner_radius = std::min(4.0 * g.spacing, p.radius / 8.0);
    auto compensated = [&](double phi, double rho) {
      const double lr2 = std::log(rho * rho);
      return a.elliptic ? phi + 2.0 * p.eta * lr2 : phi + lr2 + std::log(lr2 * lr2);
    };
    a.drift = ring_mean(sol, p.center, a.inner_radius, compensated) -
              ring_mean(sol, p.center, a.outer_radius, compensated);
    if (a.elliptic) {
      a.expected_slope = -2.0 * p.eta;
      // φ − s log ρ² is bounded, so the slope is fitted over many decades
      const double lo = kFitDecades * a.outer_radius;
      std::vector<double> xs, ys;
      for (int k = 0; k < kFitRings; ++k) {
        const double rho = lo * std::pow(a.outer_radius / lo, static_cast<double>(k) / (kFitRings - 1));
        xs.push_back(std::log(rho * rho));
        ys.push_back(ring_mean(sol, p.center, rho, [](double phi, double) { return phi; }));
      }
      const double mx = pairwise_sum(xs) / kFitRings, my = pairwise_sum(ys) / kFitRings;
      std::vector<double> sxy, sxx;
      for (int k = 0; k < kFitRings; ++k) {
        sxy.push_back((xs[k] - mx) * (ys[k] - my));
        sxx.push_back((xs[k] - mx) * (xs[k] - mx));
      }
      a.fitted_slope = pairwise_sum(sxy) / pairwise_sum(sxx);
    }
    out.sources.push_back(a);
  }
  if (sol.config().genus == 0) {
    const double rc = -g.origin.real();
    double worst = 0.0;
    for (int k = 0; k < kAngles; ++k) {
      const Complex dir = std::polar(1.0, 2.0 * kPi * (k + 0.5) / kAngles);
      auto q = [&](double rho) { return sol.phi_at(rho * dir) + 2.0 * std::log(rho * rho); };
      worst = std::max(worst, std::abs(q(0.99 * rc) - q(0.9 * rc)));
    }
    out.far_field_drift = worst;
  }
  return out;
}

double cone_oracle(double mu, int n, double shift) {
  if (!(mu > 0.0 && mu <= 1.0)) throw Error(ErrorCode::InvalidConfiguration, "cone oracle needs 0 < mu <= 1");
  if (n < 8) throw Error(ErrorCode::InvalidConfiguration, "cone oracle needs at least 8 cells per axis");
  const double h = 1.6 / n;
  auto phi = [&](double x, double y) {
    const double r2 = x * x + y * y;
    const double p = std::pow(r2, mu);
    return std::log(8.0 * mu * mu) + (mu - 1.0) * std::log(r2) - 2.0 * std::log1p(-p) + shift;
  };
  std::vector<double> t;
  for (int j = 1; j < n - 1; ++j) {
    for (int i = 1; i < n - 1; ++i) {
      const double x = -0.8 + (i + 0.5) * h, y = -0.8 + (j + 0.5) * h;
      const double r = std::hypot(x, y);
      if (r < 0.2 || r > 0.8) continue;
      const double c = phi(x, y);
      const double lap = (phi(x + h, y) + phi(x - h, y) + phi(x, y + h) + phi(x, y - h) - 4.0 * c) / (h * h);
      const double d = lap - std::exp(c);
      t.push_back(d * d * h * h);
    }
  }
  return std::sqrt(pairwise_sum(t));
}

UniquenessProbe compare_solutions(const Solution& a, const Solution& b) {
  const Grid& g = a.grid();
  const Background& bg = *a.background;
  UniquenessProbe out;
  out.spread = sup_difference(a.U, b.U);
  ScalarField d(g);
  std::vector<double> cross(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    d[k] = b.U[k] - a.U[k];
    const double ea = std::exp(a.U[k]), eb = std::exp(b.U[k]);
    if ((b.U[k] - a.U[k]) * (eb - ea) < 0.0) ++out.monotonicity_violations;
    cross[k] = g.cell_area() * d[k] * bg.r[k] * bg.beta_cells()[k] * (eb - ea);
  }
  out.gap = 0.25 * std::abs(edge_energy(d) + pairwise_sum(cross));
  out.energy_scale = 0.25 * edge_energy(a.U);
  return out;
}

UniquenessProbe uniqueness_probe(std::shared_ptr<const Background> bg, const SolverSettings& settings, int n_inits) {
  if (n_inits < 1) throw Error(ErrorCode::InvalidConfiguration, "uniqueness probe needs at least one start");
  const Method method = bg->grid().periodic ? Method::Variational : Method::Picard;
  std::mt19937_64 rng(settings.seed);
  std::vector<Solution> sols;
  for (int k = 0; k < n_inits; ++k) {
    if (k == 0) {
      sols.push_back(solve(bg, settings, method));
    } else {
      const ScalarField start = random_start(bg->grid(), bg->L, rng);
      sols.push_back(solve(bg, settings, method, &start));
    }
  }
  std::size_t ia = 0, ib = 0;
  double spread = 0.0;
  for (std::size_t a = 0; a < sols.size(); ++a) {
    for (std::size_t b = a + 1; b < sols.size(); ++b) {
      const double s = sup_difference(sols[a].U, sols[b].U);
      if (s > spread || (ia == ib)) {
        spread = s;
        ia = a;
        ib = b;
      }
    }
  }
  UniquenessProbe out = compare_solutions(sols[ia], sols[ib]);
  out.monotonicity_violations = 0;
  for (std::size_t a = 0; a < sols.size(); ++a) {
    for (std::size_t b = a + 1; b < sols.size(); ++b) {
      out.monotonicity_violations += compare_solutions(sols[a], sols[b]).monotonicity_violations;
    }
  }
  out.energy_scale = 0.25 * edge_energy(sols[0].U);
  out.solutions = std::move(sols);
  return out;
}

FunctionalBounds check_functional_bounds(const Solution& sol) {
  const Functional F = sol.grid().periodic ? Functional::periodic(sol.background)
                                           : Functional::dirichlet(sol.background, sol.U);
  const double mass = F.beta_mass();
  FunctionalBounds out;
  out.lower = (1.0 + std::log(sol.background->lambda1)) * mass;
  out.upper = sol.background->lambda2 * mass;
  out.at_zero = eval_functional(F, ScalarField(sol.grid()));
  out.at_solution = eval_functional(F, sol.U);
  return out;
}

bool VerificationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

VerificationReport verify(const Solution& sol, const SolverSettings& settings, const UniquenessProbe* probe,
                          const Thresholds& limits) {
  VerificationReport rep;
  auto add = [&](std::string name, double value, double threshold, std::string note = {}) {
    rep.checks.push_back({std::move(name), value, threshold, std::isfinite(value) && value <= threshold,
                          std::move(note)});
  };
  rep.area = check_area(sol);
  add("area", rep.area.relative_error(), limits.area);
  rep.residual = check_residual(sol);
  add("residual", rep.residual, limits.residual_factor * settings.tolerance);
  rep.asymptotics = check_asymptotics(sol);
  for (std::size_t s = 0; s < rep.asymptotics.sources.size(); ++s) {
    const auto& a = rep.asymptotics.sources[s];
    if (a.elliptic) {
      add("slope[" + std::to_string(s) + "]", std::abs(a.fitted_slope - a.expected_slope), limits.slope);
    } else {
      add("parabolic_drift[" + std::to_string(s) + "]", std::abs(a.drift), limits.parabolic_drift,
          "empirical threshold: the compensated quantity settles like 1/log rho");
    }
  }
  if (rep.asymptotics.far_field_drift) add("far_field", *rep.asymptotics.far_field_drift, limits.far_field);
  rep.functional = check_functional_bounds(sol);
  rep.checks.push_back({"functional_bounds", static_cast<double>(sol.diagnostics.bound_violations), 0.0,
                        rep.functional.holds() && sol.diagnostics.bound_violations == 0, {}});
  if (probe != nullptr) {
    rep.uniqueness = *probe;
    rep.uniqueness->solutions.clear();
    add("uniqueness_spread", probe->spread, limits.spread_factor * settings.tolerance);
    add("energy_gap", probe->gap, limits.gap * probe->energy_scale);
    add("monotonicity", static_cast<double>(probe->monotonicity_violations), 0.0);
  }
  return rep;
}

}  // namespace liouville
