#pragma once

#include <memory>

#include "liouville/background.hpp"
#include "liouville/settings.hpp"
#include "liouville/solution.hpp"

namespace liouville {

/// σ(x) = x on [−L, L], sign(x)·(L + L tanh((|x| − L)/L)) outside.
/// Saturates at ±2L; 0 < σ′ ≤ 1. Returns 0 for L ≤ 0.
[[nodiscard]] double sigma(double x, double L);

enum class BoundaryMode {
  Periodic,  // torus: every cell free, edges wrap
  Dirichlet  // outer ring of cells held at given values
};

/// Discrete I[U] = Σ_edges ½(U_a − U_b)² + h² Σ_cells (−β̄U + rβ̄e^U) over
/// the free cells. Edge differences make the exact gradient the 5-point form.
struct Functional {
  std::shared_ptr<const Background> bg;
  BoundaryMode mode = BoundaryMode::Periodic;
  ScalarField boundary;  // Dirichlet ring values (interior ignored)
  double L = 0.0;

  /// Periodic on torus grids; Dirichlet with `ring` on the others.
  static Functional periodic(std::shared_ptr<const Background> bg);
  static Functional dirichlet(std::shared_ptr<const Background> bg, const ScalarField& ring);

  [[nodiscard]] bool is_free(int i, int j) const;
  /// Σ β̄ h² over the free cells.
  [[nodiscard]] double beta_mass() const;
};

[[nodiscard]] double eval_functional(const Functional& F, const ScalarField& U);

/// I[U + d] − I[U], summed per cell without cancellation (d ignored on
/// fixed cells).
[[nodiscard]] double functional_change(const Functional& F, const ScalarField& U, const ScalarField& d);

/// −Δ_h U − β̄ + rβ̄e^U on free cells, 0 on fixed ones. The derivative of
/// eval_functional is h² times this field.
[[nodiscard]] ScalarField eval_gradient(const Functional& F, const ScalarField& U);

/// Pointwise σ on free cells.
[[nodiscard]] ScalarField truncate(const Functional& F, const ScalarField& U);

/// Preconditioned gradient descent with Armijo backtracking from `init`
/// (zero when null; fixed cells always take the boundary values). Stops
/// when sup|gradient| < tolerance. Throws NoConvergenceError.
[[nodiscard]] Solution minimize(const Functional& F, const SolverSettings& settings,
                                const ScalarField* init = nullptr);

}  // namespace liouville
