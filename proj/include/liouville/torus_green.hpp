#pragma once

#include <memory>

#include "liouville/background.hpp"
#include "liouville/model.hpp"
#include "liouville/radial.hpp"

namespace liouville {

/// Zero-mean Green function of the flat Laplacian on a rectangular torus,
/// ΔG(·, z0) = δ_z0 − 1/A. Split as (1/4π) log|ζ|² χ(|ζ|) + R(ζ) with ζ the
/// shortest lattice displacement and χ a C∞ log-radius cutoff from 0.15 to
/// 0.4 of the shorter period. R is smooth, periodic and even; it is solved
/// spectrally once and interpolated.
class TorusGreen {
 public:
  /// `n` cells along the first period; the second period must be a whole
  /// number of cells.
  TorusGreen(const SourceConfiguration& config, int n);

  [[nodiscard]] double operator()(Complex z, Complex z0) const;
  [[nodiscard]] double area() const { return area_; }
  [[nodiscard]] const LogCutoff& cutoff() const { return cutoff_; }
  [[nodiscard]] Complex displacement(Complex z, Complex z0) const;
  /// R sampled at ζ = (i h, j h).
  [[nodiscard]] const ScalarField& remainder() const { return remainder_; }

  /// G(·, z0) at the centres of `grid`, shifted so the discrete mean is 0.
  [[nodiscard]] ScalarField snapshot(const Grid& grid, Complex z0) const;

 private:
  double l1_ = 1.0;
  double l2_ = 1.0;
  double area_ = 1.0;
  LogCutoff cutoff_;
  ScalarField remainder_;
};

/// ∫ log ρ² χ(ρ) d²z for a log-radius cutoff χ.
[[nodiscard]] double cutoff_log_integral(const LogCutoff& chi);

/// Genus 1: v = 4π Σ_K (−2η_K) G(·, z_K) − 4π Σ_P G(·, z_P) + w₀ + ∫G β
/// (zero continuum mean), assembled from the analytic patch potentials,
/// the Green cutoff and a spectral periodic solve for the smooth rest.
/// Throws RBoundViolation.
[[nodiscard]] Background build_background_torus(std::shared_ptr<const BetaDensity> beta, const TorusGreen& green);

}  // namespace liouville
