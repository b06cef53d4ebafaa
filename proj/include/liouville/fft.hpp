#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace liouville::fft {

/// Owning wrapper around a pair of FFTW r2c / c2r plans of size nx × ny
/// (row-major, x fastest). Plans use FFTW_ESTIMATE so results are
/// reproducible bit for bit.
class RealTransform2D {
 public:
  RealTransform2D(int nx, int ny);
  ~RealTransform2D();
  RealTransform2D(const RealTransform2D&) = delete;
  RealTransform2D& operator=(const RealTransform2D&) = delete;

  [[nodiscard]] int nx() const { return nx_; }
  [[nodiscard]] int ny() const { return ny_; }
  /// Number of complex coefficients along x (nx/2 + 1).
  [[nodiscard]] int nkx() const { return nx_ / 2 + 1; }

  [[nodiscard]] std::span<double> real() { return {real_, static_cast<std::size_t>(nx_) * ny_}; }
  /// Interleaved (re, im) coefficients, nkx × ny.
  [[nodiscard]] std::span<double> spectrum() { return {spec_, static_cast<std::size_t>(nkx()) * ny_ * 2}; }

  void forward();   // real → spectrum
  void backward();  // spectrum → real, unnormalized

 private:
  int nx_;
  int ny_;
  double* real_;
  double* spec_;
  void* plan_fwd_;
  void* plan_bwd_;
};

/// Solves (−Δ_h + κ) u = f with homogeneous Dirichlet data on an
/// mx × my block of cells (5-point stencil, spacing h) via DST-I.
class DirichletSolver {
 public:
  DirichletSolver(int mx, int my, double spacing);
  ~DirichletSolver();
  DirichletSolver(const DirichletSolver&) = delete;
  DirichletSolver& operator=(const DirichletSolver&) = delete;

  /// In-place: rhs (mx·my, row-major) becomes the solution.
  void solve(std::span<double> rhs, double kappa);

 private:
  int mx_;
  int my_;
  double h_;
  double* buf_;
  void* plan_;
  std::vector<double> sx_;  // 2 − 2cos(πk/(m+1))
  std::vector<double> sy_;
};

enum class Symbol { FivePoint, Spectral };

/// Solves (−Δ + κ) u = f on a periodic nx × ny grid. For κ = 0 the mean of
/// f is removed and u has zero mean.
class PeriodicSolver {
 public:
  PeriodicSolver(int nx, int ny, double spacing, Symbol symbol);

  void solve(std::span<double> rhs, double kappa);

 private:
  RealTransform2D tr_;
  std::vector<double> symbol_;  // nkx × ny
};

}  // namespace liouville::fft
