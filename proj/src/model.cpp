#include "liouville/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liouville/error.hpp"

namespace liouville {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::TopologyViolation: return "TopologyViolation";
    case ErrorCode::InvalidWeight: return "InvalidWeight";
    case ErrorCode::CoincidentSources: return "CoincidentSources";
    case ErrorCode::InvalidConfiguration: return "InvalidConfiguration";
    case ErrorCode::ParabolicMassExcess: return "ParabolicMassExcess";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::EvaluationAtSingularity: return "EvaluationAtSingularity";
    case ErrorCode::RBoundViolation: return "RBoundViolation";
    case ErrorCode::NonFiniteIterate: return "NonFiniteIterate";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

double SourceConfiguration::topological_excess() const {
  double s = 0.0;
  for (const auto& e : elliptic) s += 2.0 * e.eta;
  s += static_cast<double>(parabolic.size());
  return s + 2.0 * genus - 2.0;
}

std::vector<Complex> SourceConfiguration::positions() const {
  std::vector<Complex> out;
  out.reserve(source_count());
  for (const auto& e : elliptic) out.push_back(e.position);
  for (const auto& p : parabolic) out.push_back(p.position);
  return out;
}

Complex chart_displacement(const SourceConfiguration& config, Complex z, Complex w) {
  Complex best = z - w;
  if (config.genus != 1) return best;
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) {
      const Complex d = z - w + static_cast<double>(m) * config.periods[0] + static_cast<double>(n) * config.periods[1];
      if (std::norm(d) < std::norm(best)) best = d;
    }
  }
  return best;
}

double chart_distance(const SourceConfiguration& config, Complex z, Complex w) {
  return std::abs(chart_displacement(config, z, w));
}

namespace {

double domain_scale(const SourceConfiguration& config) {
  if (config.genus == 1) return std::max(std::abs(config.periods[0]), std::abs(config.periods[1]));
  double m = 0.0;
  for (const auto& z : config.positions()) m = std::max(m, std::abs(z));
  return 2.0 * m + 2.0;
}

}  // namespace

void validate_topology(const SourceConfiguration& config) {
  if (config.genus < 0) throw Error(ErrorCode::InvalidConfiguration, "genus must be >= 0");
  for (std::size_t k = 0; k < config.elliptic.size(); ++k) {
    const double eta = config.elliptic[k].eta;
    if (!(eta > 0.0 && eta < 0.5)) {
      std::ostringstream msg;
      msg << "elliptic[" << k << "].eta = " << eta << " outside (0, 1/2)";
      throw Error(ErrorCode::InvalidWeight, msg.str());
    }
  }
  const auto pos = config.positions();
  for (std::size_t k = 0; k < pos.size(); ++k) {
    if (!std::isfinite(pos[k].real()) || !std::isfinite(pos[k].imag())) {
      throw Error(ErrorCode::InvalidConfiguration, "source " + std::to_string(k) + " has a non-finite position");
    }
  }
  if (config.genus == 1) {
    const Complex a = config.periods[0];
    const Complex b = config.periods[1];
    const double det = a.real() * b.imag() - a.imag() * b.real();
    if (!(std::abs(det) > 1e-12 * std::abs(a) * std::abs(b))) {
      throw Error(ErrorCode::InvalidConfiguration, "periods are linearly dependent over the reals");
    }
    for (std::size_t k = 0; k < pos.size(); ++k) {
      // coordinates in the period basis
      const double s = (pos[k].real() * b.imag() - pos[k].imag() * b.real()) / det;
      const double t = (a.real() * pos[k].imag() - a.imag() * pos[k].real()) / det;
      if (s < 0.0 || s >= 1.0 || t < 0.0 || t >= 1.0) {
        throw Error(ErrorCode::InvalidConfiguration,
                    "source " + std::to_string(k) + " lies outside the fundamental parallelogram");
      }
    }
  }
  const double min_sep = 1e-6 * domain_scale(config);
  for (std::size_t a = 0; a < pos.size(); ++a) {
    for (std::size_t b = a + 1; b < pos.size(); ++b) {
      if (chart_distance(config, pos[a], pos[b]) <= min_sep) {
        throw Error(ErrorCode::CoincidentSources,
                    "sources " + std::to_string(a) + " and " + std::to_string(b) + " coincide");
      }
    }
  }
  const double excess = config.topological_excess();
  if (!(excess > 0.0)) {
    std::ostringstream msg;
    msg << "sum 2*eta + #parabolic + 2g - 2 = " << excess << " is not positive; no solution exists";
    throw Error(ErrorCode::TopologyViolation, msg.str());
  }
}

double target_beta_mass(const SourceConfiguration& config) {
  return 4.0 * std::numbers::pi * config.topological_excess();
}

Grid::Grid(Complex origin_, double spacing_, int nx_, int ny_, bool periodic_)
    : origin(origin_), spacing(spacing_), nx(nx_), ny(ny_), periodic(periodic_) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw Error(ErrorCode::InvalidConfiguration, "grid spacing must be positive and finite");
  }
  if (nx < 4 || ny < 4) throw Error(ErrorCode::InvalidConfiguration, "grid needs at least 4 cells per axis");
}

ScalarField::ScalarField(const Grid& grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

ScalarField::ScalarField(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw Error(ErrorCode::InvalidConfiguration, "field size does not match its grid");
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

double ScalarField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

double pairwise_sum(std::span<const double> xs) {
  constexpr std::size_t kBlock = 64;
  if (xs.size() <= kBlock) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

double field_integral(const ScalarField& f) {
  return f.grid().cell_area() * pairwise_sum(f.values());
}

namespace {

// Fractional cell coordinate of z and the index/weight helpers shared by the
// interpolators.
struct Locator {
  const Grid& g;
  [[nodiscard]] int wrap_x(int i) const {
    if (g.periodic) return ((i % g.nx) + g.nx) % g.nx;
    return std::clamp(i, 0, g.nx - 1);
  }
  [[nodiscard]] int wrap_y(int j) const {
    if (g.periodic) return ((j % g.ny) + g.ny) % g.ny;
    return std::clamp(j, 0, g.ny - 1);
  }
};

}  // namespace

double interpolate_bilinear(const ScalarField& f, Complex z) {
  const Grid& g = f.grid();
  double x = (z.real() - g.origin.real()) / g.spacing - 0.5;
  double y = (z.imag() - g.origin.imag()) / g.spacing - 0.5;
  if (!g.periodic) {
    x = std::clamp(x, 0.0, g.nx - 1.0);
    y = std::clamp(y, 0.0, g.ny - 1.0);
  }
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const double tx = x - fx;
  const double ty = y - fy;
  const Locator loc{g};
  const int i0 = loc.wrap_x(static_cast<int>(fx));
  const int i1 = loc.wrap_x(static_cast<int>(fx) + 1);
  const int j0 = loc.wrap_y(static_cast<int>(fy));
  const int j1 = loc.wrap_y(static_cast<int>(fy) + 1);
  return (1 - tx) * (1 - ty) * f.at(i0, j0) + tx * (1 - ty) * f.at(i1, j0) + (1 - tx) * ty * f.at(i0, j1) +
         tx * ty * f.at(i1, j1);
}

namespace {

std::array<double, 4> catmull_rom_weights(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {-0.5 * t3 + t2 - 0.5 * t, 1.5 * t3 - 2.5 * t2 + 1.0, -1.5 * t3 + 2.0 * t2 + 0.5 * t, 0.5 * t3 - 0.5 * t2};
}

}  // namespace

double interpolate_bicubic(const ScalarField& f, Complex z) {
  const Grid& g = f.grid();
  double x = (z.real() - g.origin.real()) / g.spacing - 0.5;
  double y = (z.imag() - g.origin.imag()) / g.spacing - 0.5;
  if (!g.periodic) {
    x = std::clamp(x, 0.0, g.nx - 1.0);
    y = std::clamp(y, 0.0, g.ny - 1.0);
  }
  const double fx = std::floor(x);
  const double fy = std::floor(y);
  const auto wx = catmull_rom_weights(x - fx);
  const auto wy = catmull_rom_weights(y - fy);
  const Locator loc{g};
  double acc = 0.0;
  for (int b = 0; b < 4; ++b) {
    const int j = loc.wrap_y(static_cast<int>(fy) - 1 + b);
    double row = 0.0;
    for (int a = 0; a < 4; ++a) {
      row += wx[a] * f.at(loc.wrap_x(static_cast<int>(fx) - 1 + a), j);
    }
    acc += wy[b] * row;
  }
  return acc;
}

}  // namespace liouville
