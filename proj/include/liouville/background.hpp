#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "liouville/model.hpp"
#include "liouville/radial.hpp"
#include "liouville/settings.hpp"

namespace liouville {

enum class SourceKind { Elliptic, Parabolic };

/// One singular source with its β patch. `shape` is the source's radial
/// contribution to β: for elliptic sources the unit-plateau excess
/// χ·((ρ/r_K)^(−4η) − 1), for parabolic sources χ·8/(ρ² log² ρ²). `hole`
/// is the cutoff χ that removes the plateau inside a parabolic patch.
struct Patch {
  SourceKind kind = SourceKind::Elliptic;
  std::size_t index = 0;  // position in config.elliptic / config.parabolic
  Complex center;
  double eta = 0.0;
  double core_radius = 0.0;  // χ ≡ 1 below
  double radius = 0.0;       // support
  double charge = 0.0;       // 8πη or 4π
  RadialProfile shape;
  RadialProfile hole;
};

/// Radial variable that removes a patch's singular weight w(ρ) from polar
/// integrals: ∫ f ρ dρ = jacobian() ∫ (f / w) ds. Elliptic: w = ρ^(−4η),
/// s = ρ^(2−4η). Parabolic: w = 1/(ρ² log² ρ²), s = −1/log ρ² (ρ < 1).
struct SingularRadial {
  SourceKind kind = SourceKind::Elliptic;
  double eta = 0.0;

  explicit SingularRadial(const Patch& p) : kind(p.kind), eta(p.eta) {}
  [[nodiscard]] double s_of(double rho) const;
  /// Clamped below at 1e-10 so that evaluation points stay off the source.
  [[nodiscard]] double rho_of(double s) const;
  [[nodiscard]] double log_weight(double rho) const;
  [[nodiscard]] double jacobian() const;
};

/// Genus-0 bulk profile: 1 for ρ ≤ 0.75R, (R/ρ)⁴ for ρ ≥ R, blended in log ρ.
class BaseProfile {
 public:
  BaseProfile() = default;
  explicit BaseProfile(double outer_radius);
  [[nodiscard]] double value(double rho) const;
  [[nodiscard]] double cumulative(double rho) const;
  [[nodiscard]] double inner() const { return inner_; }
  [[nodiscard]] double outer() const { return outer_; }

 private:
  [[nodiscard]] double blend_integral(double rho) const;
  double inner_ = 0.0;
  double outer_ = 0.0;
  double blend_total_ = 0.0;
};

struct BetaDensity {
  SourceConfiguration config;
  Grid grid;                 // computational chart (periodic for genus 1)
  double outer_radius = 0.0; // R, genus 0 only
  double plateau = 0.0;      // b
  std::vector<Patch> patches;
  BaseProfile base;
  double mass = 0.0;                  // ∫β over the chart, analytic
  double fixed_parabolic_mass = 0.0;  // Σ ∫ χ·8/(ρ² log² ρ²)
  double shape_mass = 0.0;            // mass of the blend at unit plateau
  ScalarField cells;                  // cell averages of β

  [[nodiscard]] double operator()(Complex z) const;
  [[nodiscard]] double log_value(Complex z) const { return std::log((*this)(z)); }
  /// z − c, reduced to the nearest lattice image on the torus.
  [[nodiscard]] Complex displacement(Complex z, Complex c) const;
  /// Sampled bound constants: per patch, min/max of β·ρ^(4η) (elliptic) or
  /// β·ρ² log² ρ² / 8 (parabolic) over the patch core.
  [[nodiscard]] std::vector<std::pair<double, double>> patch_bounds(int samples = 1000) const;
};

/// Throws ParabolicMassExcess or QuadratureFailure.
[[nodiscard]] BetaDensity build_beta(const SourceConfiguration& config, const SolverSettings& settings);

/// Σ_K (−2η_K) log|z − z_K|² − Σ_P log|z − z_P|² (nearest images on the torus).
[[nodiscard]] double phi1(const SourceConfiguration& config, Complex z);

/// −log log²|ζ|² χ(|ζ|) summed over parabolic patches.
[[nodiscard]] double w0(const BetaDensity& beta, Complex z);

/// The density whose potential builds v around a parabolic source,
/// β − Δw₀ − (plateau part), as a radial profile: −b in the core and
/// −bχ − ρ⁻²(χ_uu g + 2χ_u g_u) on the blend, g = −log(4 log² ρ).
[[nodiscard]] RadialProfile parabolic_potential_density(const Patch& patch, double plateau);

struct Background {
  std::shared_ptr<const BetaDensity> beta;
  ScalarField v;      // cell centres
  ScalarField log_r;  // v − log β at cell centres
  ScalarField r;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double L = 0.0;  // max(|log λ₁|, |log λ₂|)
  std::vector<unsigned char> residual_mask;  // 0 on each patch plus a three-cell collar
  std::function<double(Complex)> v_eval;

  [[nodiscard]] const Grid& grid() const { return beta->grid; }
  [[nodiscard]] const ScalarField& beta_cells() const { return beta->cells; }
  [[nodiscard]] double v_at(Complex z) const { return v_eval(z); }
  [[nodiscard]] double r_at(Complex z) const { return std::exp(v_eval(z) - beta->log_value(z)); }
};

/// Genus 0: v = φ₁ + w₀ + (1/4π)∫log|z − z′|²(β − Δw₀). Throws RBoundViolation.
[[nodiscard]] Background build_background(std::shared_ptr<const BetaDensity> beta, const SolverSettings& settings);

/// ∫ e^v over the axis-aligned cell [x0, x1] × [y0, y1] with a singular
/// point of `p` at `c` (inside, on or outside the cell): a signed fan of
/// triangles from c, each integrated in polar form with SingularRadial.
[[nodiscard]] double singular_cell_integral(const std::function<double(Complex)>& log_f, const Patch& p, Complex c,
                                            double x0, double x1, double y0, double y1);

/// Fills log_r, r, the bounds and residual_mask from a finished v snapshot
/// and v_eval.
/// Cells within four cells of a source take the finite-volume ratio
/// ∫_cell e^v / ∫_cell β, which resolves the sub-cell cusp of r.
void finish_background(Background& bg);

}  // namespace liouville
