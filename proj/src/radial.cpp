#include "liouville/radial.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "liouville/error.hpp"

namespace liouville {

namespace {
constexpr int kPanels = 32;
constexpr int kNodes = 20;

// Chebyshev coefficients of the antiderivative of g on [a, b], as a series
// Σ_{j≥1} C_j T_j in the local variable. Constant term dropped.
std::vector<double> chebyshev_antiderivative(const std::function<double(double)>& g, double a, double b) {
  std::vector<double> f(kNodes), c(kNodes + 2, 0.0);
  for (int k = 0; k < kNodes; ++k) {
    const double x = std::cos(std::numbers::pi * (k + 0.5) / kNodes);
    f[k] = g(0.5 * (a + b) + 0.5 * (b - a) * x);
  }
  for (int j = 0; j < kNodes; ++j) {
    double sum = 0.0;
    for (int k = 0; k < kNodes; ++k) sum += f[k] * std::cos(std::numbers::pi * j * (k + 0.5) / kNodes);
    c[j] = 2.0 * sum / kNodes;
  }
  std::vector<double> out(kNodes + 1, 0.0);
  for (int j = 1; j <= kNodes; ++j) out[j] = 0.5 * (b - a) * (c[j - 1] - c[j + 1]) / (2.0 * j);
  return out;
}

double chebyshev_sum(const double* C, double x) {
  double t0 = 1.0, t1 = x, s = C[1] * x;
  for (int j = 2; j <= kNodes; ++j) {
    const double t2 = 2.0 * x * t1 - t0;
    s += C[j] * t2;
    t0 = t1;
    t1 = t2;
  }
  return s;
}
}  // namespace

double smoothstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double smoothstep_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double q = t * (1.0 - t);
  return 30.0 * q * q;
}

double smoothstep_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

double bumpstep(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return 1.0 / (1.0 + std::exp(1.0 / t - 1.0 / (1.0 - t)));
}

double bumpstep_d1(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  // S(1 − S) = 1/(4 cosh²(g/2)) stays finite where e^g overflows
  const double g = 1.0 / t - 1.0 / (1.0 - t);
  if (std::abs(g) > 1400.0) return 0.0;  // e^{−|g|} underflows
  const double c = std::cosh(0.5 * g);
  const double g1 = -1.0 / (t * t) - 1.0 / ((1.0 - t) * (1.0 - t));
  return -g1 / (4.0 * c * c);
}

double bumpstep_d2(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double g = 1.0 / t - 1.0 / (1.0 - t);
  if (std::abs(g) > 1400.0) return 0.0;
  const double c = std::cosh(0.5 * g);
  const double q = 1.0 / (4.0 * c * c);
  const double g1 = -1.0 / (t * t) - 1.0 / ((1.0 - t) * (1.0 - t));
  const double g2 = 2.0 / (t * t * t) - 2.0 / ((1.0 - t) * (1.0 - t) * (1.0 - t));
  // S′ = −q g′ and S″ = (1 − 2S) q g′² − q g″, with 1 − 2S = tanh(g/2)
  return -(g2 * q - std::tanh(0.5 * g) * q * g1 * g1);
}

double LogCutoff::value(double rho) const {
  const double du = std::log(outer / inner);
  const double t = std::log(rho / inner) / du;
  return 1.0 - (c_infinity ? bumpstep(t) : smoothstep(t));
}

double LogCutoff::d_u(double rho) const {
  const double du = std::log(outer / inner);
  const double t = std::log(rho / inner) / du;
  return -(c_infinity ? bumpstep_d1(t) : smoothstep_d1(t)) / du;
}

double LogCutoff::d_uu(double rho) const {
  const double du = std::log(outer / inner);
  const double t = std::log(rho / inner) / du;
  return -(c_infinity ? bumpstep_d2(t) : smoothstep_d2(t)) / (du * du);
}

RadialProfile::RadialProfile(Core core, double core_radius, double outer_radius,
                             std::function<double(double)> transition)
    : core_(core), core_radius_(core_radius), outer_radius_(outer_radius), transition_(std::move(transition)) {
  if (!(core_radius > 0.0 && outer_radius > core_radius)) {
    throw Error(ErrorCode::InvalidConfiguration, "radial profile needs 0 < core radius < outer radius");
  }
  if (core_.kind == CoreKind::Power && !(core_.exponent < 2.0)) {
    throw Error(ErrorCode::InvalidConfiguration, "power core must be integrable (exponent < 2)");
  }
  if (core_.kind == CoreKind::InvLogSq && !(core_radius < 1.0)) {
    throw Error(ErrorCode::InvalidConfiguration, "log-squared core needs core radius < 1");
  }
  core_total_ = core_cumulative(core_radius_);
  panel_cum_.assign(kPanels + 1, 0.0);
  panel_log_.assign(kPanels + 1, 0.0);
  cheb_cum_.assign(kPanels * (kNodes + 1), 0.0);
  cheb_log_.assign(kPanels * (kNodes + 1), 0.0);
  const double w = (outer_radius_ - core_radius_) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double a = core_radius_ + k * w;
    auto fill = [&](std::vector<double>& table, std::vector<double>& cheb, auto g) {
      const auto C = chebyshev_antiderivative(g, a, a + w);
      std::copy(C.begin(), C.end(), cheb.begin() + k * (kNodes + 1));
      table[k + 1] = table[k] + chebyshev_sum(C.data(), 1.0) - chebyshev_sum(C.data(), -1.0);
    };
    fill(panel_cum_, cheb_cum_, [&](double s) { return transition_(s) * s; });
    fill(panel_log_, cheb_log_, [&](double s) { return transition_(s) * s * 2.0 * std::log(s); });
  }
  total_cumulative_ = core_total_ + panel_cum_.back();
  transition_log_total_ = panel_log_.back();
  if (!std::isfinite(total_cumulative_) || !std::isfinite(transition_log_total_)) {
    throw Error(ErrorCode::QuadratureFailure, "radial profile integrals are not finite");
  }
}

double RadialProfile::value(double rho) const {
  if (rho >= outer_radius_) return 0.0;
  if (rho > core_radius_) return transition_(rho);
  if (core_.kind == CoreKind::Power) return core_.amplitude * std::pow(rho, -core_.exponent) + core_.constant;
  const double l = std::log(rho * rho);
  return core_.amplitude * 8.0 / (rho * rho * l * l) + core_.constant;
}

double RadialProfile::core_cumulative(double rho) const {
  if (rho <= 0.0) return 0.0;
  double s = 0.5 * core_.constant * rho * rho;
  if (core_.kind == CoreKind::Power) {
    const double k = 2.0 - core_.exponent;
    s += core_.amplitude * std::pow(rho, k) / k;
  } else {
    s += -2.0 * core_.amplitude / std::log(rho);
  }
  return s;
}

double RadialProfile::core_log_moment(double a, double b) const {
  // antiderivative of 2 log s · s^(k−1) is 2 s^k (log s / k − 1/k²)
  auto power_part = [](double s, double k) {
    if (s <= 0.0) return 0.0;
    const double sk = std::pow(s, k);
    return 2.0 * sk * (std::log(s) / k - 1.0 / (k * k));
  };
  double out = core_.constant * (power_part(b, 2.0) - power_part(a, 2.0));
  if (core_.kind == CoreKind::Power) {
    const double k = 2.0 - core_.exponent;
    out += core_.amplitude * (power_part(b, k) - power_part(a, k));
  } else {
    // ∫ 2 log s · 2A/(s log² s) ds = 4A log|log s|
    out += 4.0 * core_.amplitude * (std::log(std::abs(std::log(b))) - std::log(std::abs(std::log(a))));
  }
  return out;
}

double RadialProfile::transition_partial(double rho, bool log_weight) const {
  const double w = (outer_radius_ - core_radius_) / kPanels;
  const int k = std::clamp(static_cast<int>((rho - core_radius_) / w), 0, kPanels - 1);
  const double a = core_radius_ + k * w;
  const auto& table = log_weight ? panel_log_ : panel_cum_;
  if (rho <= a) return table[k];
  const double* C = (log_weight ? cheb_log_ : cheb_cum_).data() + k * (kNodes + 1);
  const double x = std::min(1.0, 2.0 * (rho - a) / w - 1.0);
  return table[k] + chebyshev_sum(C, x) - chebyshev_sum(C, -1.0);
}

double RadialProfile::cumulative(double rho) const {
  if (rho <= 0.0) return 0.0;
  if (rho <= core_radius_) return core_cumulative(rho);
  if (rho < outer_radius_) return core_total_ + transition_partial(rho, false);
  return total_cumulative_;
}

double RadialProfile::potential(double rho) const {
  if (rho >= outer_radius_) return 0.5 * std::log(rho * rho) * total_cumulative_;
  double tail = 0.0;
  if (rho < core_radius_) {
    tail = core_log_moment(rho, core_radius_) + transition_log_total_;
  } else {
    tail = transition_log_total_ - transition_partial(rho, true);
  }
  if (rho <= 0.0) return 0.5 * tail;
  return 0.5 * (std::log(rho * rho) * cumulative(rho) + tail);
}

namespace {

double edge_contribution(const std::function<double(double)>& cumulative, std::complex<double> a,
                         std::complex<double> b, std::span<const double> breakpoints) {
  const std::complex<double> edge = b - a;
  const double len = std::abs(edge);
  const double cross = a.real() * b.imag() - a.imag() * b.real();
  const double d = std::abs(cross) / len;
  if (d <= 1e-15 * len) return 0.0;
  const std::complex<double> e = edge / len;
  const double ta = a.real() * e.real() + a.imag() * e.imag();
  const double tb = b.real() * e.real() + b.imag() * e.imag();
  const double alpha_lo = std::atan2(ta, d);
  const double alpha_hi = std::atan2(tb, d);

  std::vector<double> cuts{alpha_lo, alpha_hi, 0.0};
  for (double r : breakpoints) {
    if (r > d) {
      const double c = std::acos(d / r);
      cuts.push_back(c);
      cuts.push_back(-c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  auto integrand = [&](double alpha) { return cumulative(d / std::cos(alpha)); };
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = std::max(cuts[k], alpha_lo);
    const double hi = std::min(cuts[k + 1], alpha_hi);
    if (hi <= lo) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 21>::integrate(integrand, lo, hi, 8, 1e-11);
  }
  return cross > 0.0 ? total : -total;
}

}  // namespace

double integrate_radial_over_rect(const std::function<double(double)>& cumulative, std::complex<double> center,
                                  double x0, double x1, double y0, double y1, std::span<const double> breakpoints) {
  const std::complex<double> p00{x0 - center.real(), y0 - center.imag()};
  const std::complex<double> p10{x1 - center.real(), y0 - center.imag()};
  const std::complex<double> p11{x1 - center.real(), y1 - center.imag()};
  const std::complex<double> p01{x0 - center.real(), y1 - center.imag()};
  return edge_contribution(cumulative, p00, p10, breakpoints) + edge_contribution(cumulative, p10, p11, breakpoints) +
         edge_contribution(cumulative, p11, p01, breakpoints) + edge_contribution(cumulative, p01, p00, breakpoints);
}

}  // namespace liouville
