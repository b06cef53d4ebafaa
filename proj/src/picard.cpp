#include "liouville/picard.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "liouville/variational.hpp"

namespace liouville {

namespace {

double weighted_exp_mass(const Background& bg, const ScalarField& U, double shift) {
  std::vector<double> t(U.size());
  for (std::size_t k = 0; k < U.size(); ++k) t[k] = bg.r[k] * bg.beta_cells()[k] * std::exp(U[k] + shift);
  return pairwise_sum(t);
}

double sup_distance(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

PicardStep picard_step(const ScalarField& U, const Background& bg, DiscretePotential& kernel, double omega) {
  const ScalarField& beta = bg.beta_cells();
  const double mass = pairwise_sum(beta.values());
  PicardStep out;
  out.shift = std::log(mass / weighted_exp_mass(bg, U, 0.0));
  ScalarField density(U.grid());
  for (std::size_t k = 0; k < U.size(); ++k) density[k] = (bg.r[k] * std::exp(U[k] + out.shift) - 1.0) * beta[k];
  ScalarField u1(U.grid());
  kernel.apply(density.values(), u1.values());
  out.c1 = std::log(mass / weighted_exp_mass(bg, u1, 0.0));
  out.U = ScalarField(U.grid());
  for (std::size_t k = 0; k < U.size(); ++k) out.U[k] = (1.0 - omega) * U[k] + omega * (u1[k] + out.c1);
  if (!std::isfinite(out.shift) || !std::isfinite(out.c1) || !out.U.all_finite()) {
    throw Error(ErrorCode::NonFiniteIterate, "Picard step overflowed");
  }
  return out;
}

Solution solve_sphere(std::shared_ptr<const Background> bg, const SolverSettings& settings, const ScalarField* init) {
  validate_settings(settings);
  if (bg->beta->config.genus != 0) throw Error(ErrorCode::InvalidConfiguration, "solve_sphere needs genus 0");
  const auto start = std::chrono::steady_clock::now();
  const Grid& g = bg->grid();
  DiscretePotential kernel(g.nx, g.ny, g.spacing, settings.convolution);
  constexpr double kOmegaFloor = 1.0 / 32.0;

  Solution sol;
  sol.background = bg;
  sol.method = Method::Picard;
  auto& diag = sol.diagnostics;
  ScalarField U = init != nullptr ? *init : ScalarField(g);
  double residual = relative_residual(pde_defect(U, *bg), *bg);
  double omega = settings.damping;
  ScalarField best = U;
  double best_residual = residual;
  double best_c1 = 0.0;
  double c1 = 0.0;
  auto finish = [&](const ScalarField& field, double res, double c) {
    sol.U = field;
    sol.c1 = c;
    diag.residual = res;
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  for (int it = 1; it <= settings.max_iterations; ++it) {
    diag.iterations = it;
    PicardStep step;
    double next = 0.0;
    try {
      step = picard_step(U, *bg, kernel, omega);
      if (step.U.max_abs() > 4.0 * bg->L) {
        for (auto& x : step.U.values()) x = sigma(x, bg->L);
        ++diag.clamps;
      }
      next = relative_residual(pde_defect(step.U, *bg), *bg);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NonFiniteIterate || omega <= kOmegaFloor) throw;
      omega = std::max(0.5 * omega, kOmegaFloor);
      continue;
    }
    if (!diag.residuals.empty() && next > residual && omega > kOmegaFloor) {
      omega = std::max(0.5 * omega, kOmegaFloor);
      continue;
    }
    const double du = sup_distance(step.U, U);
    U = std::move(step.U);
    residual = next;
    c1 = step.c1;
    diag.update = du;
    diag.damping.push_back(omega);
    diag.residuals.push_back(residual);
    if (residual < best_residual) {
      best = U;
      best_residual = residual;
      best_c1 = c1;
    }
    if (du < settings.tolerance && residual < settings.tolerance) {
      finish(U, residual, c1);
      return sol;
    }
  }
  finish(best, best_residual, best_c1);
  throw NoConvergenceError("Picard iteration did not converge in " + std::to_string(settings.max_iterations) +
                               " iterations",
                           sol);
}

Solution solve_sphere(const SourceConfiguration& config, const SolverSettings& settings) {
  validate_topology(config);
  validate_settings(settings);
  if (config.genus != 0) throw Error(ErrorCode::InvalidConfiguration, "solve_sphere needs genus 0");
  auto beta = std::make_shared<const BetaDensity>(build_beta(config, settings));
  auto bg = std::make_shared<const Background>(build_background(beta, settings));
  return solve_sphere(bg, settings);
}

}  // namespace liouville
