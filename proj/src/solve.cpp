#include "liouville/solve.hpp"

#include <cmath>

#include "liouville/picard.hpp"
#include "liouville/torus_green.hpp"
#include "liouville/variational.hpp"

namespace liouville {

std::shared_ptr<const Background> make_background(const SourceConfiguration& config, const SolverSettings& settings) {
  validate_topology(config);
  validate_settings(settings);
  auto beta = std::make_shared<const BetaDensity>(build_beta(config, settings));
  if (config.genus == 0) return std::make_shared<const Background>(build_background(beta, settings));
  const TorusGreen green(config, beta->grid.nx);
  return std::make_shared<const Background>(build_background_torus(beta, green));
}

Solution solve(std::shared_ptr<const Background> bg, const SolverSettings& settings, Method method,
               const ScalarField* init) {
  const int genus = bg->beta->config.genus;
  if (genus == 0) {
    if (method != Method::Picard) {
      throw Error(ErrorCode::InvalidConfiguration, "genus 0 is solved by Picard; minimization is a cross-check only");
    }
    return solve_sphere(std::move(bg), settings, init);
  }
  if (method != Method::Variational) {
    throw Error(ErrorCode::InvalidConfiguration, "genus 1 is solved by minimization");
  }
  return minimize(Functional::periodic(std::move(bg)), settings, init);
}

Solution solve(const SourceConfiguration& config, const SolverSettings& settings, Method method) {
  return solve(make_background(config, settings), settings, method);
}

CrossCheck cross_check(const Solution& picard, const SolverSettings& settings) {
  const Functional F = Functional::dirichlet(picard.background, picard.U);
  CrossCheck out;
  // start away from the answer so the comparison means something
  ScalarField start(picard.grid());
  for (int j = 0; j < start.grid().ny; ++j) {
    for (int i = 0; i < start.grid().nx; ++i) start.at(i, j) = F.is_free(i, j) ? 0.0 : picard.U.at(i, j);
  }
  out.variational = minimize(F, settings, &start);
  const Grid& g = picard.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (F.is_free(i, j)) {
        out.sup_difference = std::max(out.sup_difference, std::abs(out.variational.U.at(i, j) - picard.U.at(i, j)));
      }
    }
  }
  return out;
}

}  // namespace liouville
