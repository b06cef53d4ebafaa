#include "liouville/torus_green.hpp"

#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "liouville/error.hpp"
#include "liouville/fft.hpp"

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;

// ∫ f over [b_k, b_{k+1}] summed, for smooth pieces between breakpoints
double piecewise_integral(const std::function<double(double)>& f, const std::vector<double>& breaks) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    if (breaks[k + 1] > breaks[k]) s += GK::integrate(f, breaks[k], breaks[k + 1], 15, 1e-14);
  }
  return s;
}

double min_period(const SourceConfiguration& config) {
  return std::min(config.periods[0].real(), config.periods[1].imag());
}

void require_rectangular_torus(const SourceConfiguration& config) {
  if (config.genus != 1) throw Error(ErrorCode::InvalidConfiguration, "torus construction needs genus 1");
  const auto& p = config.periods;
  if (p[0].imag() != 0.0 || p[1].real() != 0.0 || !(p[0].real() > 0.0) || !(p[1].imag() > 0.0)) {
    throw Error(ErrorCode::InvalidConfiguration, "only rectangular periods (L1, i L2) are supported");
  }
}

// Δ(χh) − χΔh = ρ⁻²[χ_uu h + 2χ_u h_u] for h = slope · log ρ² = 2 slope u.
double cutoff_commutator(const LogCutoff& chi, double rho, double slope) {
  const double u = std::log(rho);
  return (chi.d_uu(rho) * 2.0 * slope * u + 4.0 * slope * chi.d_u(rho)) / (rho * rho);
}

// Six-point Lagrange interpolation on a periodic node-centred grid; the
// stencil is symmetric about each cell so reflections are preserved.
double interpolate_lagrange6(const ScalarField& f, Complex z) {
  const Grid& g = f.grid();
  const double fx = (z.real() - g.origin.real()) / g.spacing - 0.5;
  const double fy = (z.imag() - g.origin.imag()) / g.spacing - 0.5;
  const double ix = std::floor(fx), iy = std::floor(fy);
  std::array<double, 6> wx{}, wy{};
  auto weights = [](double t, std::array<double, 6>& w) {
    for (int a = 0; a < 6; ++a) {
      double l = 1.0;
      for (int c = 0; c < 6; ++c) {
        if (c != a) l *= (t - (c - 2)) / static_cast<double>(a - c);
      }
      w[a] = l;
    }
  };
  weights(fx - ix, wx);
  weights(fy - iy, wy);
  auto wrap = [](long k, int n) { return static_cast<int>(((k % n) + n) % n); };
  double s = 0.0;
  for (int b = 0; b < 6; ++b) {
    const int j = wrap(static_cast<long>(iy) + b - 2, g.ny);
    double row = 0.0;
    for (int a = 0; a < 6; ++a) row += wx[a] * f.at(wrap(static_cast<long>(ix) + a - 2, g.nx), j);
    s += wy[b] * row;
  }
  return s;
}

}  // namespace

double cutoff_log_integral(const LogCutoff& chi) {
  const double a = chi.inner;
  const double core = 2.0 * kPi * (a * a * std::log(a) - 0.5 * a * a);
  const double blend =
      piecewise_integral([&](double r) { return std::log(r * r) * chi.value(r) * 2.0 * kPi * r; }, {a, chi.outer});
  return core + blend;
}

TorusGreen::TorusGreen(const SourceConfiguration& config, int n) {
  require_rectangular_torus(config);
  if (n < 8) throw Error(ErrorCode::InvalidConfiguration, "Green grid needs at least 8 cells");
  l1_ = config.periods[0].real();
  l2_ = config.periods[1].imag();
  area_ = l1_ * l2_;
  const double h = l1_ / n;
  const double fy = l2_ / h;
  const int ny = static_cast<int>(std::lround(fy));
  if (std::abs(fy - ny) > 1e-9 * fy || ny < 8) {
    throw Error(ErrorCode::InvalidConfiguration, "second period must be a whole number of grid cells");
  }
  const double m = min_period(config);
  cutoff_ = LogCutoff{0.15 * m, 0.4 * m, true};

  // centres sit at ζ = (i h, j h) so the sample set is symmetric under ζ → −ζ
  const Grid grid(Complex{-0.5 * h, -0.5 * h}, h, n, ny, true);
  remainder_ = ScalarField(grid);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < n; ++i) {
      const double rho = std::abs(displacement(grid.center(i, j), Complex{0.0, 0.0}));
      double t = 0.0;
      if (rho > cutoff_.inner && rho < cutoff_.outer) t = cutoff_commutator(cutoff_, rho, 1.0 / (4.0 * kPi));
      // −ΔR = T + 1/A; the solver drops the mean, which is fixed below
      remainder_.at(i, j) = t + 1.0 / area_;
    }
  }
  fft::PeriodicSolver solver(n, ny, h, fft::Symbol::Spectral);
  solver.solve(remainder_.values(), 0.0);
  // zero continuum mean of G: R has zero sample mean (exact for smooth periodic R)
  const double shift = -cutoff_log_integral(cutoff_) / (4.0 * kPi * area_);
  for (auto& x : remainder_.values()) x += shift;
}

Complex TorusGreen::displacement(Complex z, Complex z0) const {
  const Complex d = z - z0;
  return Complex{d.real() - l1_ * std::round(d.real() / l1_), d.imag() - l2_ * std::round(d.imag() / l2_)};
}

double TorusGreen::operator()(Complex z, Complex z0) const {
  const Complex d = displacement(z, z0);
  const double rho = std::abs(d);
  if (rho == 0.0) throw Error(ErrorCode::EvaluationAtSingularity, "Green function evaluated at its pole");
  double g = interpolate_lagrange6(remainder_, d);
  if (rho < cutoff_.outer) g += std::log(rho * rho) * cutoff_.value(rho) / (4.0 * kPi);
  return g;
}

ScalarField TorusGreen::snapshot(const Grid& grid, Complex z0) const {
  ScalarField out(grid);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) out.at(i, j) = (*this)(grid.center(i, j), z0);
  }
  const double mean = pairwise_sum(out.values()) / static_cast<double>(out.size());
  for (auto& x : out.values()) x -= mean;
  return out;
}

namespace {

struct LocalPart {
  Complex center;
  double charge = 0.0;  // 8πη or 4π
  double scale = 1.0;
  RadialProfile profile;
  double slope = 0.0;  // exterior V = slope · log ρ²
};

struct TorusV {
  std::shared_ptr<const BetaDensity> beta;
  LogCutoff chi;
  std::vector<LocalPart> parts;
  ScalarField rest;  // smooth periodic remainder, mean shift included

  double local(Complex z) const {
    double v = w0(*beta, z);
    for (const auto& p : parts) {
      const double rho = std::abs(beta->displacement(z, p.center));
      if (rho >= chi.outer) continue;
      if (rho == 0.0) throw Error(ErrorCode::EvaluationAtSingularity, "v evaluated at a source");
      const double vs = -p.charge / (4.0 * kPi) * std::log(rho * rho) + p.scale * p.profile.potential(rho);
      v += chi.value(rho) * vs;
    }
    return v;
  }
  double operator()(Complex z) const { return local(z) + interpolate_bicubic(rest, z); }
};

}  // namespace

Background build_background_torus(std::shared_ptr<const BetaDensity> beta, const TorusGreen& green) {
  require_rectangular_torus(beta->config);
  const Grid& g = beta->grid;
  auto tv = std::make_shared<TorusV>();
  tv->beta = beta;
  tv->chi = green.cutoff();
  const LogCutoff& chi = tv->chi;
  const double b = beta->plateau;

  for (const auto& p : beta->patches) {
    if (p.radius > chi.inner * (1.0 + 1e-12)) {
      throw Error(ErrorCode::InvalidConfiguration, "source patch exceeds the Green cutoff core");
    }
    LocalPart part;
    part.center = p.center;
    part.charge = p.charge;
    if (p.kind == SourceKind::Elliptic) {
      part.profile = p.shape;
      part.scale = b;
    } else {
      part.profile = parabolic_potential_density(p, b);
    }
    part.slope = (part.scale * part.profile.mass() - part.charge) / (4.0 * kPi);
    tv->parts.push_back(std::move(part));
  }

  // Δ rest = b − Σ_s ρ⁻²[χ_uu h_s + 2χ_u h_s,u], the cutoff terms of each χ V_s
  tv->rest = ScalarField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex z = g.center(i, j);
      double t = 0.0;
      for (const auto& p : tv->parts) {
        const double rho = std::abs(beta->displacement(z, p.center));
        if (rho > chi.inner && rho < chi.outer) t += cutoff_commutator(chi, rho, p.slope);
      }
      tv->rest.at(i, j) = t - b;  // −Δ rest
    }
  }
  fft::PeriodicSolver solver(g.nx, g.ny, g.spacing, fft::Symbol::Spectral);
  solver.solve(tv->rest.values(), 0.0);

  // zero continuum mean, matching the zero-mean Green function
  const double log_moment = cutoff_log_integral(chi);
  double local_mass = 0.0;
  for (const auto& p : tv->parts) {
    const double k = p.profile.core_radius(), s = p.profile.support();
    local_mass += -p.charge / (4.0 * kPi) * log_moment;
    local_mass += p.scale * piecewise_integral(
                                [&](double r) { return p.profile.potential(r) * chi.value(r) * 2.0 * kPi * r; },
                                {0.0, k, s, chi.inner, chi.outer});
  }
  for (const auto& p : beta->patches) {
    if (p.kind != SourceKind::Parabolic) continue;
    const LogCutoff cp{p.core_radius, p.radius};
    local_mass += piecewise_integral(
        [&](double r) {
          const double l = std::log(r * r);
          return r > 0.0 ? -std::log(l * l) * cp.value(r) * 2.0 * kPi * r : 0.0;
        },
        {0.0, p.core_radius, p.radius});
  }
  const double shift = -local_mass / green.area();
  for (auto& x : tv->rest.values()) x += shift;

  Background bg;
  bg.beta = beta;
  bg.v = ScalarField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) bg.v.at(i, j) = tv->local(g.center(i, j)) + tv->rest.at(i, j);
  }
  bg.v_eval = [tv](Complex z) { return (*tv)(z); };
  finish_background(bg);
  return bg;
}

}  // namespace liouville
