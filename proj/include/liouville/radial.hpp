#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace liouville {

/// s(t) = 6t⁵ − 15t⁴ + 10t³ on [0, 1], clamped outside.
[[nodiscard]] double smoothstep(double t);
[[nodiscard]] double smoothstep_d1(double t);
[[nodiscard]] double smoothstep_d2(double t);

/// C∞ step 1/(1 + e^{1/t − 1/(1−t)}) on [0, 1] and its derivatives.
[[nodiscard]] double bumpstep(double t);
[[nodiscard]] double bumpstep_d1(double t);
[[nodiscard]] double bumpstep_d2(double t);

/// Radial cutoff equal to 1 for ρ ≤ inner and 0 for ρ ≥ outer, blended by
/// the quintic smoothstep in u = log ρ. Derivatives are taken in u, so the
/// flat Laplacian of a radial f is f_uu / ρ².
/// With `c_infinity` the blend is the logistic step 1/(1 + e^{1/t − 1/(1−t)})
/// instead, whose derivatives all vanish at both ends.
struct LogCutoff {
  double inner = 0.5;
  double outer = 1.0;
  bool c_infinity = false;

  [[nodiscard]] double value(double rho) const;
  [[nodiscard]] double d_u(double rho) const;
  [[nodiscard]] double d_uu(double rho) const;
};

/// A radial density f(ρ) supported in ρ < outer_radius with a closed-form
/// core on [0, core_radius] and a smooth numerically integrated transition
/// on [core_radius, outer_radius]. Core families:
///   Power:     f = amplitude · ρ^(−exponent) + constant      (exponent < 2)
///   InvLogSq:  f = amplitude · 8 / (ρ² log² ρ²) + constant
class RadialProfile {
 public:
  enum class CoreKind { Power, InvLogSq };
  struct Core {
    CoreKind kind = CoreKind::Power;
    double amplitude = 0.0;
    double exponent = 0.0;
    double constant = 0.0;
  };

  RadialProfile() = default;
  RadialProfile(Core core, double core_radius, double outer_radius, std::function<double(double)> transition);

  [[nodiscard]] double value(double rho) const;
  /// F(ρ) = ∫₀^ρ f(s) s ds.
  [[nodiscard]] double cumulative(double rho) const;
  /// (1/4π)∫ log|z − z′|² f(|z′|) d²z′ at |z| = ρ (shell theorem).
  [[nodiscard]] double potential(double rho) const;
  /// ∫ f d²z = 2π F(outer).
  [[nodiscard]] double mass() const { return 2.0 * 3.14159265358979323846 * total_cumulative_; }
  [[nodiscard]] double core_radius() const { return core_radius_; }
  [[nodiscard]] double support() const { return outer_radius_; }

 private:
  [[nodiscard]] double core_cumulative(double rho) const;
  /// ∫_a^b log s² f_core(s) s ds for 0 ≤ a ≤ b ≤ core radius.
  [[nodiscard]] double core_log_moment(double a, double b) const;
  /// ∫ from core radius to ρ of f(s) s ds (or with weight 2 log s), from a
  /// panel table plus a Chebyshev antiderivative on the last partial panel.
  [[nodiscard]] double transition_partial(double rho, bool log_weight) const;

  Core core_{};
  double core_radius_ = 0.0;
  double outer_radius_ = 0.0;
  std::function<double(double)> transition_;
  double core_total_ = 0.0;
  double total_cumulative_ = 0.0;
  double transition_log_total_ = 0.0;
  std::vector<double> panel_cum_;  // partial integrals at panel ends
  std::vector<double> panel_log_;
  std::vector<double> cheb_cum_;  // per-panel antiderivative coefficients
  std::vector<double> cheb_log_;
};

/// ∫ over [x0,x1]×[y0,y1] of f(|z − center|) d²z, given the radial
/// cumulative F(ρ) = ∫₀^ρ f(s) s ds. Uses the signed-triangle (polar edge)
/// decomposition; `breakpoints` lists radii where F loses smoothness.
[[nodiscard]] double integrate_radial_over_rect(const std::function<double(double)>& cumulative,
                                                std::complex<double> center, double x0, double x1, double y0,
                                                double y1, std::span<const double> breakpoints);

}  // namespace liouville
