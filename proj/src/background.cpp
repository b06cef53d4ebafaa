#include "liouville/background.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/potential.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

// 4-point Gauss–Legendre on [−½, ½]
constexpr double kGlX[4] = {-0.4305681557970263, -0.1699905217924281, 0.1699905217924281, 0.4305681557970263};
constexpr double kGlW[4] = {0.1739274225687269, 0.3260725774312731, 0.3260725774312731, 0.1739274225687269};

double min_distance_to_rect(Complex c, double x0, double x1, double y0, double y1) {
  const double dx = std::max({x0 - c.real(), 0.0, c.real() - x1});
  const double dy = std::max({y0 - c.imag(), 0.0, c.imag() - y1});
  return std::hypot(dx, dy);
}

double max_distance_to_rect(Complex c, double x0, double x1, double y0, double y1) {
  const double dx = std::max(std::abs(x0 - c.real()), std::abs(x1 - c.real()));
  const double dy = std::max(std::abs(y0 - c.imag()), std::abs(y1 - c.imag()));
  return std::hypot(dx, dy);
}

RadialProfile elliptic_shape(double eta, double radius) {
  const LogCutoff chi{0.5 * radius, radius};
  RadialProfile::Core core{RadialProfile::CoreKind::Power, std::pow(radius, 4.0 * eta), 4.0 * eta, -1.0};
  return RadialProfile(core, 0.5 * radius, radius,
                       [chi, eta, radius](double rho) { return chi.value(rho) * (std::pow(rho / radius, -4.0 * eta) - 1.0); });
}

RadialProfile parabolic_shape(double core) {
  const LogCutoff chi{core, 2.0 * core};
  RadialProfile::Core c{RadialProfile::CoreKind::InvLogSq, 1.0, 0.0, 0.0};
  return RadialProfile(c, core, 2.0 * core, [chi](double rho) {
    const double l = std::log(rho * rho);
    return chi.value(rho) * 8.0 / (rho * rho * l * l);
  });
}

RadialProfile parabolic_hole(double core) {
  const LogCutoff chi{core, 2.0 * core};
  RadialProfile::Core c{RadialProfile::CoreKind::Power, 0.0, 0.0, 1.0};
  return RadialProfile(c, core, 2.0 * core, [chi](double rho) { return chi.value(rho); });
}

void set_parabolic_core(Patch& p, double core) {
  p.core_radius = core;
  p.radius = 2.0 * core;
  p.shape = parabolic_shape(core);
  p.hole = parabolic_hole(core);
}

Grid make_chart(const SourceConfiguration& config, const SolverSettings& settings, double outer_radius) {
  const int n = settings.grid;
  Grid g;
  if (config.genus == 0) {
    const double rc = settings.truncation_radius > 0.0 ? settings.truncation_radius : 4.0 * outer_radius;
    if (rc < outer_radius) {
      throw Error(ErrorCode::InvalidConfiguration, "truncation radius must be at least the outer radius R");
    }
    const double h = 2.0 * rc / n;
    g = Grid(Complex{-rc, -rc}, h, n, n, false);
  } else {
    const Complex w1 = config.periods[0];
    const Complex w2 = config.periods[1];
    if (w1.imag() != 0.0 || w2.real() != 0.0 || !(w1.real() > 0.0) || !(w2.imag() > 0.0)) {
      throw Error(ErrorCode::InvalidConfiguration,
                  "periods: only rectangular lattices (L1 > 0 real, i·L2 with L2 > 0) can be solved");
    }
    const double h = w1.real() / n;
    const double ny_real = w2.imag() / h;
    const int ny = static_cast<int>(std::lround(ny_real));
    if (std::abs(ny_real - ny) > 1e-9 * ny_real) {
      throw Error(ErrorCode::InvalidConfiguration, "periods: L2 / L1 · grid must be an integer");
    }
    g = Grid(Complex{0.0, 0.0}, h, n, ny, true);
  }
  // no source may sit on a cell centre
  for (const Complex z : config.positions()) {
    const double fx = (z.real() - g.origin.real()) / g.spacing - 0.5;
    const double fy = (z.imag() - g.origin.imag()) / g.spacing - 0.5;
    if (std::abs(fx - std::round(fx)) < 1e-6 && std::abs(fy - std::round(fy)) < 1e-6) {
      g.origin += Complex{0.5 * g.spacing, 0.5 * g.spacing};
      break;
    }
  }
  return g;
}

// Cell averages of a radial profile (scaled) added into `out`, with lattice
// images on periodic charts.
void add_patch_cells(ScalarField& out, const Patch& p, const RadialProfile& prof, double scale,
                     const SourceConfiguration& config) {
  if (scale == 0.0) return;
  const Grid& g = out.grid();
  const double h = g.spacing;
  const std::vector<double> bp{p.core_radius, p.radius};
  auto F = [&](double rho) { return prof.cumulative(rho); };
  std::vector<Complex> centres{p.center};
  if (g.periodic) {
    const double l1 = config.periods[0].real();
    const double l2 = config.periods[1].imag();
    centres.clear();
    for (int a = -1; a <= 1; ++a) {
      for (int c = -1; c <= 1; ++c) centres.push_back(p.center + Complex{a * l1, c * l2});
    }
  }
  for (const Complex c : centres) {
    const int i0 = static_cast<int>(std::floor((c.real() - p.radius - g.origin.real()) / h));
    const int i1 = static_cast<int>(std::floor((c.real() + p.radius - g.origin.real()) / h));
    const int j0 = static_cast<int>(std::floor((c.imag() - p.radius - g.origin.imag()) / h));
    const int j1 = static_cast<int>(std::floor((c.imag() + p.radius - g.origin.imag()) / h));
    for (int j = std::max(j0, 0); j <= std::min(j1, g.ny - 1); ++j) {
      for (int i = std::max(i0, 0); i <= std::min(i1, g.nx - 1); ++i) {
        const double x0 = g.origin.real() + i * h, y0 = g.origin.imag() + j * h;
        if (min_distance_to_rect(c, x0, x0 + h, y0, y0 + h) >= p.radius) continue;
        out.at(i, j) += scale * integrate_radial_over_rect(F, c, x0, x0 + h, y0, y0 + h, bp) / (h * h);
      }
    }
  }
}

std::vector<Patch> make_patches(const SourceConfiguration& config, double outer_radius) {
  std::vector<Patch> patches;
  const auto positions = config.positions();
  double min_period = std::numeric_limits<double>::infinity();
  if (config.genus == 1) min_period = std::min(config.periods[0].real(), config.periods[1].imag());
  for (std::size_t s = 0; s < positions.size(); ++s) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < positions.size(); ++t) {
      if (t != s) nearest = std::min(nearest, chart_distance(config, positions[s], positions[t]));
    }
    double radius = std::min(0.45 * nearest, 0.5);
    if (config.genus == 0) {
      radius = std::min(radius, 0.45 * (outer_radius - std::abs(positions[s])));
    } else {
      radius = std::min(radius, 0.15 * min_period);
    }
    Patch p;
    p.center = positions[s];
    if (s < config.elliptic.size()) {
      p.kind = SourceKind::Elliptic;
      p.index = s;
      p.eta = config.elliptic[s].eta;
      p.core_radius = 0.5 * radius;
      p.radius = radius;
      p.charge = 8.0 * kPi * p.eta;
      p.shape = elliptic_shape(p.eta, radius);
    } else {
      p.kind = SourceKind::Parabolic;
      p.index = s - config.elliptic.size();
      p.charge = 4.0 * kPi;
      set_parabolic_core(p, 0.5 * std::min(radius, 0.4));
    }
    patches.push_back(std::move(p));
  }
  return patches;
}

}  // namespace

BaseProfile::BaseProfile(double outer_radius) : inner_(0.75 * outer_radius), outer_(outer_radius) {
  blend_total_ = blend_integral(outer_);
}

double BaseProfile::value(double rho) const {
  if (rho <= inner_) return 1.0;
  const double tail = std::pow(outer_ / rho, 4);
  if (rho >= outer_) return tail;
  const double s = smoothstep(std::log(rho / inner_) / std::log(outer_ / inner_));
  return (1.0 - s) + s * tail;
}

double BaseProfile::blend_integral(double rho) const {
  return boost::math::quadrature::gauss<double, 30>::integrate([this](double s) { return value(s) * s; }, inner_,
                                                               rho);
}

double BaseProfile::cumulative(double rho) const {
  if (rho <= inner_) return 0.5 * rho * rho;
  if (rho < outer_) return 0.5 * inner_ * inner_ + blend_integral(rho);
  const double r4 = std::pow(outer_, 4);
  return 0.5 * inner_ * inner_ + blend_total_ + 0.5 * r4 * (1.0 / (outer_ * outer_) - 1.0 / (rho * rho));
}

Complex BetaDensity::displacement(Complex z, Complex c) const {
  if (config.genus != 1) return z - c;
  const double l1 = config.periods[0].real();
  const double l2 = config.periods[1].imag();
  const Complex d = z - c;
  return Complex{d.real() - l1 * std::round(d.real() / l1), d.imag() - l2 * std::round(d.imag() / l2)};
}

double BetaDensity::operator()(Complex z) const {
  double v = config.genus == 0 ? plateau * base.value(std::abs(z)) : plateau;
  for (const auto& p : patches) {
    const double rho = std::abs(displacement(z, p.center));
    if (rho >= p.radius) continue;
    if (p.kind == SourceKind::Elliptic) {
      v += plateau * p.shape.value(rho);
    } else {
      v += p.shape.value(rho) - plateau * p.hole.value(rho);
    }
  }
  return v;
}

std::vector<std::pair<double, double>> BetaDensity::patch_bounds(int samples) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& p : patches) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int k = 0; k < samples; ++k) {
      // log-uniform radii down to 10⁻⁶ of the core, golden-angle directions
      const double t = (k + 0.5) / samples;
      const double rho = p.core_radius * std::pow(1e-6, 1.0 - t);
      const double ang = 2.399963229728653 * k;
      const double b = (*this)(p.center + std::polar(rho, ang));
      double m = 0.0;
      if (p.kind == SourceKind::Elliptic) {
        m = b * std::pow(rho, 4.0 * p.eta);
      } else {
        const double l = std::log(rho * rho);
        m = b * rho * rho * l * l / 8.0;
      }
      lo = std::min(lo, m);
      hi = std::max(hi, m);
    }
    out.emplace_back(lo, hi);
  }
  return out;
}

BetaDensity build_beta(const SourceConfiguration& config, const SolverSettings& settings) {
  validate_topology(config);
  validate_settings(settings);
  if (config.genus > 1) throw Error(ErrorCode::InvalidConfiguration, "only genus 0 and 1 can be solved");

  BetaDensity beta;
  beta.config = config;
  double max_abs = 0.0;
  for (const Complex z : config.positions()) max_abs = std::max(max_abs, std::abs(z));
  if (config.genus == 0) {
    beta.outer_radius = 2.0 * max_abs + 2.0;
    beta.base = BaseProfile(beta.outer_radius);
  }
  beta.grid = make_chart(config, settings, beta.outer_radius);
  beta.patches = make_patches(config, beta.outer_radius);

  const double target = target_beta_mass(config);
  auto parabolic_mass = [&] {
    double m = 0.0;
    for (const auto& p : beta.patches) {
      if (p.kind == SourceKind::Parabolic) m += p.shape.mass();
    }
    return m;
  };
  // smaller cusp cores carry less mass; leave at least 10% for the plateau
  int halvings = 0;
  while (parabolic_mass() > 0.9 * target) {
    if (++halvings > 10) {
      throw Error(ErrorCode::ParabolicMassExcess, "parabolic patch mass exceeds the target after 10 halvings");
    }
    for (auto& p : beta.patches) {
      if (p.kind == SourceKind::Parabolic) set_parabolic_core(p, 0.5 * p.core_radius);
    }
  }
  beta.fixed_parabolic_mass = parabolic_mass();

  const Grid& g = beta.grid;
  double base_mass = 0.0;
  if (config.genus == 0) {
    const std::vector<double> bp{beta.base.inner(), beta.base.outer()};
    base_mass = integrate_radial_over_rect([&](double r) { return beta.base.cumulative(r); }, Complex{0.0, 0.0},
                                           g.origin.real(), g.origin.real() + g.width(), g.origin.imag(),
                                           g.origin.imag() + g.height(), bp);
  } else {
    base_mass = g.width() * g.height();
  }
  double shape = base_mass;
  for (const auto& p : beta.patches) shape += p.kind == SourceKind::Elliptic ? p.shape.mass() : -p.hole.mass();
  beta.shape_mass = shape;
  beta.plateau = (target - beta.fixed_parabolic_mass) / shape;
  beta.mass = beta.plateau * shape + beta.fixed_parabolic_mass;
  if (!std::isfinite(beta.mass) || !(beta.plateau > 0.0)) {
    throw Error(ErrorCode::QuadratureFailure, "β normalization produced a non-finite or non-positive plateau");
  }

  // cell averages
  beta.cells = ScalarField(g, config.genus == 0 ? 0.0 : beta.plateau);
  if (config.genus == 0) {
    const double h = g.spacing;
    const std::vector<double> bp{beta.base.inner(), beta.base.outer()};
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const double x0 = g.origin.real() + i * h, y0 = g.origin.imag() + j * h;
        const double dmin = min_distance_to_rect(Complex{}, x0, x0 + h, y0, y0 + h);
        const double dmax = max_distance_to_rect(Complex{}, x0, x0 + h, y0, y0 + h);
        // the blend joins C² at the two circles; cells crossing them get 8 × 8 sub-cells
        const bool straddles = (dmin < bp[0] && dmax > bp[0]) || (dmin < bp[1] && dmax > bp[1]);
        const int sub = straddles ? 8 : 1;
        const double hs = h / sub;
        double avg = 0.0;
        for (int sb = 0; sb < sub; ++sb) {
          for (int sa = 0; sa < sub; ++sa) {
            const Complex c{x0 + (sa + 0.5) * hs, y0 + (sb + 0.5) * hs};
            for (int b = 0; b < 4; ++b) {
              for (int a = 0; a < 4; ++a) {
                avg += kGlW[a] * kGlW[b] * beta.base.value(std::abs(c + Complex{kGlX[a] * hs, kGlX[b] * hs}));
              }
            }
          }
        }
        avg /= sub * sub;
        beta.cells.at(i, j) = beta.plateau * avg;
      }
    }
  }
  for (const auto& p : beta.patches) {
    if (p.kind == SourceKind::Elliptic) {
      add_patch_cells(beta.cells, p, p.shape, beta.plateau, config);
    } else {
      add_patch_cells(beta.cells, p, p.shape, 1.0, config);
      add_patch_cells(beta.cells, p, p.hole, -beta.plateau, config);
    }
  }
  if (!beta.cells.all_finite()) throw Error(ErrorCode::QuadratureFailure, "β cell averages are not finite");
  return beta;
}

double phi1(const SourceConfiguration& config, Complex z) {
  double v = 0.0;
  auto term = [&](Complex c, double weight) {
    const double r2 = std::norm(chart_displacement(config, z, c));
    if (r2 == 0.0) throw Error(ErrorCode::EvaluationAtSingularity, "φ₁ evaluated at a source");
    v -= weight * std::log(r2);
  };
  for (const auto& e : config.elliptic) term(e.position, 2.0 * e.eta);
  for (const auto& p : config.parabolic) term(p.position, 1.0);
  return v;
}

double w0(const BetaDensity& beta, Complex z) {
  double v = 0.0;
  for (const auto& p : beta.patches) {
    if (p.kind != SourceKind::Parabolic) continue;
    const double rho = std::abs(beta.displacement(z, p.center));
    if (rho >= p.radius) continue;
    if (rho == 0.0) throw Error(ErrorCode::EvaluationAtSingularity, "w₀ evaluated at a parabolic source");
    const double l = std::log(rho * rho);
    v += -std::log(l * l) * LogCutoff{p.core_radius, p.radius}.value(rho);
  }
  return v;
}

RadialProfile parabolic_potential_density(const Patch& patch, double plateau) {
  const LogCutoff chi{patch.core_radius, patch.radius};
  RadialProfile::Core core{RadialProfile::CoreKind::Power, 0.0, 0.0, -plateau};
  return RadialProfile(core, patch.core_radius, patch.radius, [chi, plateau](double rho) {
    const double u = std::log(rho);
    const double g = -std::log(4.0 * u * u);
    const double gu = -2.0 / u;
    return -plateau * chi.value(rho) - (chi.d_uu(rho) * g + 2.0 * chi.d_u(rho) * gu) / (rho * rho);
  });
}

double SingularRadial::s_of(double rho) const {
  return kind == SourceKind::Elliptic ? std::pow(rho, 2.0 - 4.0 * eta) : -1.0 / std::log(rho * rho);
}

double SingularRadial::rho_of(double s) const {
  const double rho = kind == SourceKind::Elliptic ? std::pow(s, 1.0 / (2.0 - 4.0 * eta)) : std::exp(-0.5 / s);
  return std::max(rho, 1e-10);
}

double SingularRadial::log_weight(double rho) const {
  const double l = std::log(rho * rho);
  return kind == SourceKind::Elliptic ? -2.0 * eta * l : -l - std::log(l * l);
}

double SingularRadial::jacobian() const { return kind == SourceKind::Elliptic ? 1.0 / (2.0 - 4.0 * eta) : 0.5; }

double singular_cell_integral(const std::function<double(Complex)>& log_f, const Patch& p, Complex c, double x0,
                              double x1, double y0, double y1) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const SingularRadial sr(p);
  const Complex corners[4] = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
  const double scale = std::max(x1 - x0, y1 - y0);
  if (min_distance_to_rect(c, x0, x1, y0, y1) > 0.5 * scale) {
    return GL::integrate(
        [&](double x) { return GL::integrate([&](double y) { return std::exp(log_f({x, y})); }, y0, y1); }, x0, x1);
  }
  // pieces end at the patch's cutoff radii; the cusp substitution needs ρ < 1
  // and the weight is smooth beyond ρ = ½
  const double cusp_limit = sr.kind == SourceKind::Parabolic ? 0.5 : std::numeric_limits<double>::infinity();
  auto ray = [&](Complex q) {
    const double R = std::abs(q);
    const Complex dir = q / R;
    double cuts[4] = {0.0, p.core_radius, p.radius, cusp_limit};
    double out = 0.0;
    for (int k = 0; k < 3 && cuts[k] < R; ++k) {
      const double a = cuts[k], b = std::min(cuts[k + 1], R);
      if (!(b > a)) continue;
      out += sr.jacobian() * GL::integrate(
                                 [&](double s) {
                                   const double rho = sr.rho_of(s);
                                   return std::exp(log_f(c + rho * dir) - sr.log_weight(rho));
                                 },
                                 a > 0.0 ? sr.s_of(a) : 0.0, sr.s_of(b));
    }
    if (cusp_limit < R) {
      out += GL::integrate([&](double rho) { return std::exp(log_f(c + rho * dir)) * rho; }, cusp_limit, R);
    }
    return out;
  };
  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    // triangle (c, a, b) parametrised along the edge: dθ = cross / |q(u)|² du
    const Complex a = corners[e] - c, edge = corners[(e + 1) % 4] - corners[e];
    const double cross = a.real() * edge.imag() - a.imag() * edge.real();
    if (std::abs(cross) < 1e-14 * scale * scale) continue;
    auto along = [&](double u) {
      const Complex q = a + u * edge;
      return ray(q) * cross / std::norm(q);
    };
    const double foot = std::clamp(-(a.real() * edge.real() + a.imag() * edge.imag()) / std::norm(edge), 0.0, 1.0);
    if (foot > 0.0) total += GL::integrate(along, 0.0, foot);
    if (foot < 1.0) total += GL::integrate(along, foot, 1.0);
  }
  return total;
}

void finish_background(Background& bg) {
  const Grid& g = bg.grid();
  const BetaDensity& beta = *bg.beta;
  bg.log_r = ScalarField(g);
  bg.r = ScalarField(g);
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z = g.center(i, j);
      double lr = bg.v.at(i, j) - beta.log_value(z);
      for (const auto& p : beta.patches) {
        const Complex d = beta.displacement(z, p.center);
        if (std::abs(d) >= 4.0 * g.spacing || !bg.v_eval) continue;
        const double hh = 0.5 * g.spacing;
        const double mass = singular_cell_integral(bg.v_eval, p, z - d, z.real() - hh, z.real() + hh,
                                                   z.imag() - hh, z.imag() + hh);
        lr = std::log(mass / (beta.cells.at(i, j) * g.cell_area()));
        break;
      }
      bg.log_r.at(i, j) = lr;
      bg.r.at(i, j) = std::exp(lr);
      lo = std::min(lo, lr);
      hi = std::max(hi, lr);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi) || !bg.r.all_finite()) {
    throw Error(ErrorCode::RBoundViolation, "r = e^v/β is not positive and finite on the grid");
  }
  bg.lambda1 = std::exp(lo);
  bg.lambda2 = std::exp(hi);
  if (!(bg.lambda1 > 0.0) || !std::isfinite(bg.lambda2)) {
    throw Error(ErrorCode::RBoundViolation, "r bounds under- or overflow");
  }
  bg.L = std::max(std::abs(lo), std::abs(hi));
  bg.residual_mask.assign(g.size(), 1);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      for (const auto& p : beta.patches) {
        if (std::abs(beta.displacement(g.center(i, j), p.center)) < p.radius + 3.0 * g.spacing) {
          bg.residual_mask[g.index(i, j)] = 0;
        }
      }
    }
  }
}

namespace {

struct SphereV {
  std::shared_ptr<const BetaDensity> beta;
  ScalarField base_potential;
  std::vector<std::pair<Complex, RadialProfile>> radial;
  std::vector<double> scale;

  double operator()(Complex z) const {
    double v = phi1(beta->config, z) + w0(*beta, z) + interpolate_bicubic(base_potential, z);
    for (std::size_t k = 0; k < radial.size(); ++k) v += scale[k] * radial[k].second.potential(std::abs(z - radial[k].first));
    return v;
  }
};

}  // namespace

Background build_background(std::shared_ptr<const BetaDensity> beta, const SolverSettings& settings) {
  if (beta->config.genus != 0) throw Error(ErrorCode::InvalidConfiguration, "build_background is the genus-0 builder");
  const Grid& g = beta->grid;
  auto sv = std::make_shared<SphereV>();
  sv->beta = beta;

  // the bulk b·base is β̄ minus the patch cell averages; the patches get analytic potentials
  ScalarField patch_cells(g);
  for (const auto& p : beta->patches) {
    if (p.kind == SourceKind::Elliptic) {
      add_patch_cells(patch_cells, p, p.shape, beta->plateau, beta->config);
    } else {
      add_patch_cells(patch_cells, p, p.shape, 1.0, beta->config);
      add_patch_cells(patch_cells, p, p.hole, -beta->plateau, beta->config);
    }
  }
  ScalarField base_cells(g);
  for (std::size_t k = 0; k < g.size(); ++k) base_cells[k] = beta->cells[k] - patch_cells[k];

  sv->base_potential = ScalarField(g);
  LogKernelConvolution conv(g.nx, g.ny, g.spacing, settings.convolution);
  conv.apply(base_cells.values(), sv->base_potential.values());

  for (const auto& p : beta->patches) {
    if (p.kind == SourceKind::Elliptic) {
      sv->radial.emplace_back(p.center, p.shape);
      sv->scale.push_back(beta->plateau);
    } else {
      sv->radial.emplace_back(p.center, parabolic_potential_density(p, beta->plateau));
      sv->scale.push_back(1.0);
    }
  }

  Background bg;
  bg.beta = beta;
  bg.v = ScalarField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z = g.center(i, j);
      double v = phi1(beta->config, z) + w0(*beta, z) + sv->base_potential.at(i, j);
      for (std::size_t k = 0; k < sv->radial.size(); ++k) {
        v += sv->scale[k] * sv->radial[k].second.potential(std::abs(z - sv->radial[k].first));
      }
      bg.v.at(i, j) = v;
    }
  }
  bg.v_eval = [sv](Complex z) { return (*sv)(z); };
  finish_background(bg);
  return bg;
}

}  // namespace liouville
