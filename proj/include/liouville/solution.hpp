#pragma once

#include <memory>
#include <string>
#include <vector>

#include "liouville/background.hpp"
#include "liouville/error.hpp"
#include "liouville/model.hpp"

namespace liouville {

enum class Method { Picard, Variational };

struct Diagnostics {
  int iterations = 0;
  double residual = 0.0;  // relative PDE residual at exit
  double update = 0.0;    // last sup-norm change of U
  std::vector<double> damping;    // ω (Picard) or step length (variational) per accepted step
  std::vector<double> residuals;  // per accepted step
  std::vector<double> energies;   // I[U] per accepted step, variational only
  int clamps = 0;                 // times σ was applied
  int bound_violations = 0;       // evaluated I[U] below (1 + log λ₁)∫β, variational only
  double wall_seconds = 0.0;
};

/// φ = v + U on the background grid.
struct Solution {
  std::shared_ptr<const Background> background;
  ScalarField U;
  double c1 = 0.0;
  Method method = Method::Picard;
  Diagnostics diagnostics;

  [[nodiscard]] const SourceConfiguration& config() const { return background->beta->config; }
  [[nodiscard]] const Grid& grid() const { return background->grid(); }
  [[nodiscard]] ScalarField phi() const;
  /// v evaluated exactly, U interpolated.
  [[nodiscard]] double phi_at(Complex z) const;
};

/// Iteration budget exhausted; carries the best iterate seen.
class NoConvergenceError : public Error {
 public:
  NoConvergenceError(const std::string& what, Solution best)
      : Error(ErrorCode::NoConvergence, what), best_(std::move(best)) {}
  [[nodiscard]] const Solution& best() const { return best_; }

 private:
  Solution best_;
};

/// Δ_h U + β̄ − r β̄ e^U per cell (5-point Laplacian, periodic wrap on the
/// torus). On non-periodic grids the outer ring has no stencil and is 0.
[[nodiscard]] ScalarField pde_defect(const ScalarField& U, const Background& bg);

/// ‖defect‖₂ / ‖β̄‖₂ over the stencil cells where `mask` is nonzero
/// (bg.residual_mask when null). Excluding the patches keeps the few huge
/// β̄ values at the sources from swamping both norms.
[[nodiscard]] double relative_residual(const ScalarField& defect, const Background& bg,
                                       const std::vector<unsigned char>* mask = nullptr);

}  // namespace liouville
