#include "liouville/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "liouville/error.hpp"
#include "liouville/fft.hpp"

namespace liouville {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * std::numbers::pi);

// ∂²G/∂x∂y = log(x² + y²)
double antiderivative(double x, double y) {
  double g = 0.0;
  if (x != 0.0 && y != 0.0) g += x * y * (std::log(x * x + y * y) - 3.0);
  if (x != 0.0) g += x * x * std::atan(y / x);
  if (y != 0.0) g += y * y * std::atan(x / y);
  return g;
}

}  // namespace

double log_cell_integral(double cx, double cy, double h) {
  const double a = 0.5 * h;
  return antiderivative(cx + a, cy + a) - antiderivative(cx - a, cy + a) - antiderivative(cx + a, cy - a) +
         antiderivative(cx - a, cy - a);
}

struct LogKernelConvolution::FftState {
  fft::RealTransform2D tr;
  std::vector<double> kernel_hat;
  FftState(int px, int py) : tr(px, py) {}
};

LogKernelConvolution::LogKernelConvolution(int nx, int ny, double spacing, ConvolutionMode mode)
    : nx_(nx), ny_(ny), h_(spacing), mode_(mode) {
  if (mode_ == ConvolutionMode::Auto) mode_ = (nx * ny <= 96 * 96) ? ConvolutionMode::Direct : ConvolutionMode::Fft;
  const int wx = 2 * nx - 1;
  const int wy = 2 * ny - 1;
  table_.resize(static_cast<std::size_t>(wx) * wy);
  const double h2 = h_ * h_;
  for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
    for (int di = -(nx - 1); di <= nx - 1; ++di) {
      double k = 0.0;
      if (std::abs(di) <= 1 && std::abs(dj) <= 1) {
        k = log_cell_integral(di * h_, dj * h_, h_);
      } else {
        k = h2 * std::log(h2 * (static_cast<double>(di) * di + static_cast<double>(dj) * dj));
      }
      table_[static_cast<std::size_t>(dj + ny - 1) * wx + (di + nx - 1)] = kInv4Pi * k;
    }
  }
  if (mode_ == ConvolutionMode::Fft) {
    const int px = 2 * nx;
    const int py = 2 * ny;
    fft_ = std::make_unique<FftState>(px, py);
    auto real = fft_->tr.real();
    std::fill(real.begin(), real.end(), 0.0);
    for (int dj = -(ny - 1); dj <= ny - 1; ++dj) {
      for (int di = -(nx - 1); di <= nx - 1; ++di) {
        const int i = (di + px) % px;
        const int j = (dj + py) % py;
        real[static_cast<std::size_t>(j) * px + i] = weight(di, dj);
      }
    }
    fft_->tr.forward();
    auto spec = fft_->tr.spectrum();
    fft_->kernel_hat.assign(spec.begin(), spec.end());
  }
}

LogKernelConvolution::~LogKernelConvolution() = default;

double LogKernelConvolution::weight(int di, int dj) const {
  return table_[static_cast<std::size_t>(dj + ny_ - 1) * (2 * nx_ - 1) + (di + nx_ - 1)];
}

void LogKernelConvolution::apply(std::span<const double> density, std::span<double> out) {
  const std::size_t n = static_cast<std::size_t>(nx_) * ny_;
  if (density.size() != n || out.size() != n) {
    throw Error(ErrorCode::InvalidConfiguration, "convolution: size mismatch");
  }
  if (mode_ == ConvolutionMode::Direct) {
    const int wx = 2 * nx_ - 1;
    for (int j = 0; j < ny_; ++j) {
      for (int i = 0; i < nx_; ++i) {
        double s = 0.0;
        for (int q = 0; q < ny_; ++q) {
          const double* row = &table_[static_cast<std::size_t>(j - q + ny_ - 1) * wx + (i + nx_ - 1)];
          const double* d = &density[static_cast<std::size_t>(q) * nx_];
          for (int p = 0; p < nx_; ++p) s += row[-p] * d[p];
        }
        out[static_cast<std::size_t>(j) * nx_ + i] = s;
      }
    }
    return;
  }
  const int px = 2 * nx_;
  const int py = 2 * ny_;
  auto real = fft_->tr.real();
  std::fill(real.begin(), real.end(), 0.0);
  for (int j = 0; j < ny_; ++j) {
    std::copy_n(&density[static_cast<std::size_t>(j) * nx_], nx_, &real[static_cast<std::size_t>(j) * px]);
  }
  fft_->tr.forward();
  auto spec = fft_->tr.spectrum();
  const auto& kh = fft_->kernel_hat;
  for (std::size_t k = 0; k < spec.size(); k += 2) {
    const double re = spec[k] * kh[k] - spec[k + 1] * kh[k + 1];
    const double im = spec[k] * kh[k + 1] + spec[k + 1] * kh[k];
    spec[k] = re;
    spec[k + 1] = im;
  }
  fft_->tr.backward();
  const double norm = 1.0 / (static_cast<double>(px) * py);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      out[static_cast<std::size_t>(j) * nx_ + i] = real[static_cast<std::size_t>(j) * px + i] * norm;
    }
  }
}

struct DiscretePotential::Impl {
  int nx;
  int ny;
  double h;
  LogKernelConvolution conv;
  fft::DirichletSolver interior;
  std::vector<double> rhs;
  Impl(int nx_, int ny_, double h_, ConvolutionMode mode)
      : nx(nx_), ny(ny_), h(h_), conv(nx_, ny_, h_, mode), interior(nx_ - 2, ny_ - 2, h_),
        rhs(static_cast<std::size_t>(nx_ - 2) * (ny_ - 2)) {}
};

DiscretePotential::DiscretePotential(int nx, int ny, double spacing, ConvolutionMode mode)
    : impl_(std::make_unique<Impl>(nx, ny, spacing, mode)) {}

DiscretePotential::~DiscretePotential() = default;

void DiscretePotential::apply(std::span<const double> density, std::span<double> out) {
  auto& m = *impl_;
  m.conv.apply(density, out);
  const int mx = m.nx - 2;
  const int my = m.ny - 2;
  const double inv_h2 = 1.0 / (m.h * m.h);
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * m.nx + i; };
  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) {
      double r = -density[idx(i, j)];
      if (i == 1) r += out[idx(0, j)] * inv_h2;
      if (i == mx) r += out[idx(m.nx - 1, j)] * inv_h2;
      if (j == 1) r += out[idx(i, 0)] * inv_h2;
      if (j == my) r += out[idx(i, m.ny - 1)] * inv_h2;
      m.rhs[static_cast<std::size_t>(j - 1) * mx + (i - 1)] = r;
    }
  }
  m.interior.solve(m.rhs, 0.0);
  for (int j = 1; j <= my; ++j) {
    for (int i = 1; i <= mx; ++i) out[idx(i, j)] = m.rhs[static_cast<std::size_t>(j - 1) * mx + (i - 1)];
  }
}

double newtonian_potential(const ScalarField& density, std::span<const RadialPatch> patches, Complex z) {
  const Grid& g = density.grid();
  const double h = g.spacing;
  const double h2 = h * h;
  std::vector<double> terms(density.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Complex d = g.center(i, j) - z;
      double k = 0.0;
      if (std::abs(d.real()) <= 1.5 * h && std::abs(d.imag()) <= 1.5 * h) {
        k = log_cell_integral(d.real(), d.imag(), h);
      } else {
        k = h2 * std::log(std::norm(d));
      }
      terms[g.index(i, j)] = k * density.at(i, j);
    }
  }
  double v = kInv4Pi * pairwise_sum(terms);
  for (const auto& p : patches) v += p.profile.potential(std::abs(z - p.center));
  if (!std::isfinite(v)) throw Error(ErrorCode::QuadratureFailure, "newtonian potential is not finite");
  return v;
}

}  // namespace liouville
