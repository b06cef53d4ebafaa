#include "liouville/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "liouville/error.hpp"

namespace liouville::fft {

namespace {

// the FFTW planner is not thread-safe; execution is
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

RealTransform2D::RealTransform2D(int nx, int ny) : nx_(nx), ny_(ny) {
  real_ = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
  spec_ = reinterpret_cast<double*>(fftw_alloc_complex(static_cast<std::size_t>(nkx()) * ny));
  if (real_ == nullptr || spec_ == nullptr) throw Error(ErrorCode::QuadratureFailure, "fftw allocation failed");
  // FFTW takes dimensions slowest-first.
  const std::lock_guard lock(planner_mutex());
  plan_fwd_ = fftw_plan_dft_r2c_2d(ny, nx, real_, reinterpret_cast<fftw_complex*>(spec_), FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_2d(ny, nx, reinterpret_cast<fftw_complex*>(spec_), real_, FFTW_ESTIMATE);
}

RealTransform2D::~RealTransform2D() {
  const std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(real_);
  fftw_free(spec_);
}

void RealTransform2D::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void RealTransform2D::backward() { fftw_execute(static_cast<fftw_plan>(plan_bwd_)); }

DirichletSolver::DirichletSolver(int mx, int my, double spacing) : mx_(mx), my_(my), h_(spacing) {
  buf_ = fftw_alloc_real(static_cast<std::size_t>(mx) * my);
  {
    const std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_r2r_2d(my, mx, buf_, buf_, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
  }
  sx_.resize(static_cast<std::size_t>(mx));
  sy_.resize(static_cast<std::size_t>(my));
  for (int k = 0; k < mx; ++k) sx_[k] = 2.0 - 2.0 * std::cos(std::numbers::pi * (k + 1) / (mx + 1));
  for (int k = 0; k < my; ++k) sy_[k] = 2.0 - 2.0 * std::cos(std::numbers::pi * (k + 1) / (my + 1));
}

DirichletSolver::~DirichletSolver() {
  const std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(buf_);
}

void DirichletSolver::solve(std::span<double> rhs, double kappa) {
  const std::size_t n = static_cast<std::size_t>(mx_) * my_;
  if (rhs.size() != n) throw Error(ErrorCode::InvalidConfiguration, "DirichletSolver: size mismatch");
  std::copy(rhs.begin(), rhs.end(), buf_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  const double norm = 1.0 / (4.0 * (mx_ + 1) * (my_ + 1));
  const double inv_h2 = 1.0 / (h_ * h_);
  for (int l = 0; l < my_; ++l) {
    for (int k = 0; k < mx_; ++k) {
      const double eig = (sx_[k] + sy_[l]) * inv_h2 + kappa;
      buf_[static_cast<std::size_t>(l) * mx_ + k] *= norm / eig;
    }
  }
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::copy(buf_, buf_ + n, rhs.begin());
}

PeriodicSolver::PeriodicSolver(int nx, int ny, double spacing, Symbol symbol) : tr_(nx, ny) {
  const int nkx = tr_.nkx();
  symbol_.resize(static_cast<std::size_t>(nkx) * ny);
  const double inv_h2 = 1.0 / (spacing * spacing);
  for (int l = 0; l < ny; ++l) {
    const int ls = l <= ny / 2 ? l : l - ny;
    for (int k = 0; k < nkx; ++k) {
      double s = 0.0;
      if (symbol == Symbol::FivePoint) {
        s = (4.0 - 2.0 * std::cos(2.0 * std::numbers::pi * k / nx) - 2.0 * std::cos(2.0 * std::numbers::pi * ls / ny)) *
            inv_h2;
      } else {
        const double kx = 2.0 * std::numbers::pi * k / (nx * spacing);
        const double ky = 2.0 * std::numbers::pi * ls / (ny * spacing);
        s = kx * kx + ky * ky;
      }
      symbol_[static_cast<std::size_t>(l) * nkx + k] = s;
    }
  }
}

void PeriodicSolver::solve(std::span<double> rhs, double kappa) {
  auto real = tr_.real();
  if (rhs.size() != real.size()) throw Error(ErrorCode::InvalidConfiguration, "PeriodicSolver: size mismatch");
  std::copy(rhs.begin(), rhs.end(), real.begin());
  tr_.forward();
  auto spec = tr_.spectrum();
  const double norm = 1.0 / static_cast<double>(real.size());
  for (std::size_t m = 0; m < symbol_.size(); ++m) {
    const double eig = symbol_[m] + kappa;
    const double scale = eig > 0.0 ? norm / eig : 0.0;
    spec[2 * m] *= scale;
    spec[2 * m + 1] *= scale;
  }
  tr_.backward();
  std::copy(real.begin(), real.end(), rhs.begin());
}

}  // namespace liouville::fft
