#pragma once

#include <memory>
#include <span>
#include <vector>

#include "liouville/model.hpp"
#include "liouville/radial.hpp"
#include "liouville/settings.hpp"

namespace liouville {

/// ∫ log(x² + y²) dx dy over the axis-aligned square of side h centred at
/// (cx, cy).
[[nodiscard]] double log_cell_integral(double cx, double cy, double h);

/// Cell-to-cell convolution with the continuum kernel (1/4π) log|z − z′|²
/// on a non-periodic nx × ny grid. Each source cell carries its average
/// density; the kernel is integrated exactly over the source cell for the
/// 3 × 3 neighbourhood of the target and sampled at the centre elsewhere.
class LogKernelConvolution {
 public:
  LogKernelConvolution(int nx, int ny, double spacing, ConvolutionMode mode);
  ~LogKernelConvolution();
  LogKernelConvolution(const LogKernelConvolution&) = delete;
  LogKernelConvolution& operator=(const LogKernelConvolution&) = delete;

  [[nodiscard]] ConvolutionMode mode() const { return mode_; }
  void apply(std::span<const double> density, std::span<double> out);
  /// Kernel weight (already scaled by h²/4π) for an offset in cells.
  [[nodiscard]] double weight(int di, int dj) const;

 private:
  struct FftState;
  int nx_;
  int ny_;
  double h_;
  ConvolutionMode mode_;
  std::vector<double> table_;  // (2nx − 1) × (2ny − 1)
  std::unique_ptr<FftState> fft_;
};

/// Log potential whose interior values satisfy the 5-point identity
/// Δ_h u = density exactly. The outer ring of cells takes the continuum
/// convolution; the interior is the DST Dirichlet solve with that ring as
/// boundary data.
class DiscretePotential {
 public:
  DiscretePotential(int nx, int ny, double spacing, ConvolutionMode mode);
  ~DiscretePotential();

  void apply(std::span<const double> density, std::span<double> out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// A radial density attached to a point, handled analytically.
struct RadialPatch {
  Complex center;
  RadialProfile profile;
};

/// (1/4π)∫ log|z − z′|² ρ(z′) d²z′ where ρ is the sum of the grid density
/// (cell averages) and the radial patches.
[[nodiscard]] double newtonian_potential(const ScalarField& density, std::span<const RadialPatch> patches, Complex z);

}  // namespace liouville
