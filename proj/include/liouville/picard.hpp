#pragma once

#include <memory>

#include "liouville/background.hpp"
#include "liouville/potential.hpp"
#include "liouville/settings.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct PicardStep {
  ScalarField U;       // (1 − ω)U + ω(U₁ + c₁)
  double shift = 0.0;  // s = log(∫β / ∫rβe^U), → 0 at the fixed point
  double c1 = 0.0;     // log(∫β / ∫rβe^{U₁})
};

/// One damped step of the integral equation. With s balancing the mass of
/// (re^{U+s} − 1)β, U₁ = K[(re^{U+s} − 1)β] where K is the log potential
/// satisfying the 5-point identity inside the grid, and the harmonic
/// constant c₁ is fixed by e^{c₁}∫rβe^{U₁} = ∫β. Throws NonFiniteIterate.
[[nodiscard]] PicardStep picard_step(const ScalarField& U, const Background& bg, DiscretePotential& kernel,
                                     double omega);

/// Genus-0 solve from U = 0 (or `init`). Halves ω when the residual grows
/// (floor 1/32) and applies σ when sup|U| > 4L. Converged when both the
/// sup change of U and the relative residual drop below the tolerance.
/// Throws NoConvergenceError carrying the best iterate.
[[nodiscard]] Solution solve_sphere(std::shared_ptr<const Background> bg, const SolverSettings& settings,
                                    const ScalarField* init = nullptr);

/// Validates, builds β and the background, then solves.
[[nodiscard]] Solution solve_sphere(const SourceConfiguration& config, const SolverSettings& settings);

}  // namespace liouville
