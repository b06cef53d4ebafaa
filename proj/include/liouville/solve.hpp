#pragma once

#include <memory>

#include "liouville/background.hpp"
#include "liouville/settings.hpp"
#include "liouville/solution.hpp"

namespace liouville {

/// Validates and builds β and v for genus 0 or 1.
[[nodiscard]] std::shared_ptr<const Background> make_background(const SourceConfiguration& config,
                                                                const SolverSettings& settings);

/// The solver for the genus: Picard on the sphere, periodic minimization on
/// the torus. Throws InvalidConfiguration when `method` does not apply.
[[nodiscard]] Solution solve(const SourceConfiguration& config, const SolverSettings& settings, Method method);
[[nodiscard]] Solution solve(std::shared_ptr<const Background> bg, const SolverSettings& settings, Method method,
                             const ScalarField* init = nullptr);

struct CrossCheck {
  Solution variational;
  double sup_difference = 0.0;  // over free cells
};

/// Minimizes I on the whole genus-0 chart with the Picard solution's outer
/// ring as Dirichlet data and compares the interiors.
[[nodiscard]] CrossCheck cross_check(const Solution& picard, const SolverSettings& settings);

}  // namespace liouville
