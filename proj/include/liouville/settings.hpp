#pragma once

#include <cstdint>

namespace liouville {

enum class ConvolutionMode { Auto, Direct, Fft };

struct SolverSettings {
  int grid = 256;                  // cells per axis (nx = ny on square charts)
  double truncation_radius = 0.0;  // genus 0 half-width R_c; 0 selects 4R
  double damping = 0.5;            // initial Picard relaxation ω ∈ (0, 1]
  double tolerance = 1e-8;
  int max_iterations = 4000;
  std::uint64_t seed = 1;
  ConvolutionMode convolution = ConvolutionMode::Auto;
};

/// Throws InvalidConfiguration unless tolerance > 0, 0 < damping ≤ 1,
/// grid ≥ 8 and max_iterations ≥ 1.
void validate_settings(const SolverSettings& settings);

}  // namespace liouville
