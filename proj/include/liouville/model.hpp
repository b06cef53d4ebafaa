#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace liouville {

using Complex = std::complex<double>;

struct EllipticSource {
  Complex position;
  double eta = 0.0;  // cone angle 2π(1 − 2η)
};

struct ParabolicSource {
  Complex position;
};

/// Sources on a genus-g surface. For genus 1 the periods define the
/// fundamental rectangle [0, L1) × [0, L2); only rectangular lattices
/// (periods[0] real, periods[1] purely imaginary) can be solved.
struct SourceConfiguration {
  int genus = 0;
  std::vector<EllipticSource> elliptic;
  std::vector<ParabolicSource> parabolic;
  std::array<Complex, 2> periods{Complex{1.0, 0.0}, Complex{0.0, 1.0}};

  /// Σ 2η_K + Σ_P 1 + 2g − 2.
  [[nodiscard]] double topological_excess() const;
  [[nodiscard]] std::vector<Complex> positions() const;
  [[nodiscard]] std::size_t source_count() const { return elliptic.size() + parabolic.size(); }
};

/// Throws Error{TopologyViolation | InvalidWeight | CoincidentSources |
/// InvalidConfiguration}. Any genus is accepted here; solvers reject g ≥ 2.
void validate_topology(const SourceConfiguration& config);

/// Required ∫β d²z: 4π(Σ2η + Σ_P 1 + 2g − 2).
[[nodiscard]] double target_beta_mass(const SourceConfiguration& config);

/// z − w reduced to the shortest lattice representative for genus 1
/// (images within one period; sources live in the fundamental domain).
[[nodiscard]] Complex chart_displacement(const SourceConfiguration& config, Complex z, Complex w);

/// Shortest distance between z and w, modulo the lattice for genus 1.
[[nodiscard]] double chart_distance(const SourceConfiguration& config, Complex z, Complex w);

/// Cell-centered uniform grid. Cell (i, j) covers
/// [origin.x + i h, origin.x + (i+1) h] × [origin.y + j h, origin.y + (j+1) h].
struct Grid {
  Complex origin{0.0, 0.0};
  double spacing = 1.0;
  int nx = 4;
  int ny = 4;
  bool periodic = false;

  Grid() = default;
  Grid(Complex origin_, double spacing_, int nx_, int ny_, bool periodic_ = false);

  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny); }
  [[nodiscard]] std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(i);
  }
  [[nodiscard]] Complex center(int i, int j) const {
    return origin + Complex{(i + 0.5) * spacing, (j + 0.5) * spacing};
  }
  [[nodiscard]] double width() const { return nx * spacing; }
  [[nodiscard]] double height() const { return ny * spacing; }
  [[nodiscard]] double cell_area() const { return spacing * spacing; }
  [[nodiscard]] bool operator==(const Grid&) const = default;
};

class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const Grid& grid, double fill = 0.0);
  ScalarField(const Grid& grid, std::vector<double> values);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  [[nodiscard]] double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  [[nodiscard]] double& operator[](std::size_t k) { return values_[k]; }
  [[nodiscard]] double operator[](std::size_t k) const { return values_[k]; }
  [[nodiscard]] std::span<double> values() { return values_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double max_abs() const;

 private:
  Grid grid_;
  std::vector<double> values_;
};

/// Pairwise summation with a fixed split order (bit-identical across runs).
[[nodiscard]] double pairwise_sum(std::span<const double> xs);

/// spacing² · Σ values.
[[nodiscard]] double field_integral(const ScalarField& f);

/// Bilinear interpolation of cell-centered samples; clamps outside the
/// sample hull unless the grid is periodic.
[[nodiscard]] double interpolate_bilinear(const ScalarField& f, Complex z);

/// Catmull–Rom bicubic interpolation (same boundary rules).
[[nodiscard]] double interpolate_bicubic(const ScalarField& f, Complex z);

}  // namespace liouville
