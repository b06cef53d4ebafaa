#include "liouville/variational.hpp"

#include <chrono>
#include <cmath>
#include <vector>

#include "liouville/fft.hpp"

namespace liouville {

double sigma(double x, double L) {
  if (!(L > 0.0)) return 0.0;
  const double a = std::abs(x);
  if (a <= L) return x;
  return std::copysign(L + L * std::tanh((a - L) / L), x);
}

Functional Functional::periodic(std::shared_ptr<const Background> bg) {
  if (!bg->grid().periodic) throw Error(ErrorCode::InvalidConfiguration, "periodic functional needs a torus grid");
  Functional F;
  F.L = bg->L;
  F.mode = BoundaryMode::Periodic;
  F.boundary = ScalarField(bg->grid());
  F.bg = std::move(bg);
  return F;
}

Functional Functional::dirichlet(std::shared_ptr<const Background> bg, const ScalarField& ring) {
  if (bg->grid().periodic) throw Error(ErrorCode::InvalidConfiguration, "Dirichlet functional needs a bounded chart");
  if (!(ring.grid() == bg->grid())) throw Error(ErrorCode::InvalidConfiguration, "boundary data on the wrong grid");
  Functional F;
  F.L = bg->L;
  F.mode = BoundaryMode::Dirichlet;
  F.boundary = ring;
  F.bg = std::move(bg);
  return F;
}

bool Functional::is_free(int i, int j) const {
  if (mode == BoundaryMode::Periodic) return true;
  const Grid& g = bg->grid();
  return i > 0 && j > 0 && i < g.nx - 1 && j < g.ny - 1;
}

double Functional::beta_mass() const {
  const Grid& g = bg->grid();
  std::vector<double> t;
  t.reserve(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (is_free(i, j)) t.push_back(bg->beta_cells().at(i, j));
    }
  }
  return g.cell_area() * pairwise_sum(t);
}

namespace {

// U with the Dirichlet ring replaced by the boundary data
double value(const Functional& F, const ScalarField& U, int i, int j) {
  return F.is_free(i, j) ? U.at(i, j) : F.boundary.at(i, j);
}

}  // namespace

double eval_functional(const Functional& F, const ScalarField& U) {
  const Grid& g = F.bg->grid();
  const double h2 = g.cell_area();
  const ScalarField& beta = F.bg->beta_cells();
  const ScalarField& r = F.bg->r;
  const bool wrap = F.mode == BoundaryMode::Periodic;
  // each cell owns its right and upper edge
  std::vector<double> terms(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const bool free = F.is_free(i, j);
      const double u = value(F, U, i, j);
      double t = 0.0;
      if (free) {
        const double b = beta.at(i, j);
        t += h2 * (-b * u + r.at(i, j) * b * std::exp(u));
      }
      if (wrap || i + 1 < g.nx) {
        const int ip = (i + 1) % g.nx;
        if (free || F.is_free(ip, j)) t += 0.5 * std::pow(value(F, U, ip, j) - u, 2);
      }
      if (wrap || j + 1 < g.ny) {
        const int jp = (j + 1) % g.ny;
        if (free || F.is_free(i, jp)) t += 0.5 * std::pow(value(F, U, i, jp) - u, 2);
      }
      terms[g.index(i, j)] = t;
    }
  }
  return pairwise_sum(terms);
}

double functional_change(const Functional& F, const ScalarField& U, const ScalarField& d) {
  const Grid& g = F.bg->grid();
  const double h2 = g.cell_area();
  const ScalarField& beta = F.bg->beta_cells();
  const ScalarField& r = F.bg->r;
  const bool wrap = F.mode == BoundaryMode::Periodic;
  auto step = [&](int i, int j) { return F.is_free(i, j) ? d.at(i, j) : 0.0; };
  // ½(a + δa − b − δb)² − ½(a − b)² = ½(δa − δb)(2(a − b) + δa − δb)
  auto edge = [&](int i, int j, int k, int l) {
    const double du = value(F, U, i, j) - value(F, U, k, l);
    const double dd = step(i, j) - step(k, l);
    return 0.5 * dd * (2.0 * du + dd);
  };
  std::vector<double> terms(g.size(), 0.0);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const bool free = F.is_free(i, j);
      double t = 0.0;
      if (free) {
        const double b = beta.at(i, j);
        const double dk = d.at(i, j);
        t += h2 * (-b * dk + r.at(i, j) * b * std::exp(U.at(i, j)) * std::expm1(dk));
      }
      if (wrap || i + 1 < g.nx) {
        const int ip = (i + 1) % g.nx;
        if (free || F.is_free(ip, j)) t += edge(i, j, ip, j);
      }
      if (wrap || j + 1 < g.ny) {
        const int jp = (j + 1) % g.ny;
        if (free || F.is_free(i, jp)) t += edge(i, j, i, jp);
      }
      terms[g.index(i, j)] = t;
    }
  }
  return pairwise_sum(terms);
}

ScalarField eval_gradient(const Functional& F, const ScalarField& U) {
  const Grid& g = F.bg->grid();
  const double inv_h2 = 1.0 / g.cell_area();
  const ScalarField& beta = F.bg->beta_cells();
  const ScalarField& r = F.bg->r;
  ScalarField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!F.is_free(i, j)) continue;
      // free cells of a Dirichlet grid never touch the edge, so wrapping is harmless
      const int im = (i + g.nx - 1) % g.nx, ip = (i + 1) % g.nx;
      const int jm = (j + g.ny - 1) % g.ny, jp = (j + 1) % g.ny;
      const double u = U.at(i, j);
      const double lap = (value(F, U, ip, j) + value(F, U, im, j) + value(F, U, i, jp) + value(F, U, i, jm) - 4.0 * u) *
                         inv_h2;
      const double b = beta.at(i, j);
      out.at(i, j) = -lap - b + r.at(i, j) * b * std::exp(u);
    }
  }
  return out;
}

ScalarField truncate(const Functional& F, const ScalarField& U) {
  ScalarField out = U;
  const Grid& g = U.grid();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (F.is_free(i, j)) out.at(i, j) = sigma(U.at(i, j), F.L);
    }
  }
  return out;
}

namespace {

// (−Δ_h + κ)⁻¹ on the free cells
class Preconditioner {
 public:
  explicit Preconditioner(const Functional& F) {
    const Grid& g = F.bg->grid();
    if (F.mode == BoundaryMode::Periodic) {
      periodic_ = std::make_unique<fft::PeriodicSolver>(g.nx, g.ny, g.spacing, fft::Symbol::FivePoint);
    } else {
      dirichlet_ = std::make_unique<fft::DirichletSolver>(g.nx - 2, g.ny - 2, g.spacing);
    }
  }

  ScalarField apply(const ScalarField& grad, double kappa) {
    const Grid& g = grad.grid();
    ScalarField p(g);
    if (periodic_) {
      p = grad;
      periodic_->solve(p.values(), kappa);
      return p;
    }
    const int mx = g.nx - 2, my = g.ny - 2;
    buf_.resize(static_cast<std::size_t>(mx) * my);
    for (int j = 0; j < my; ++j) {
      for (int i = 0; i < mx; ++i) buf_[static_cast<std::size_t>(j) * mx + i] = grad.at(i + 1, j + 1);
    }
    dirichlet_->solve(buf_, kappa);
    for (int j = 0; j < my; ++j) {
      for (int i = 0; i < mx; ++i) p.at(i + 1, j + 1) = buf_[static_cast<std::size_t>(j) * mx + i];
    }
    return p;
  }

 private:
  std::unique_ptr<fft::PeriodicSolver> periodic_;
  std::unique_ptr<fft::DirichletSolver> dirichlet_;
  std::vector<double> buf_;
};

double free_sup(const Functional& F, const ScalarField& f) {
  const Grid& g = f.grid();
  double m = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (F.is_free(i, j)) m = std::max(m, std::abs(f.at(i, j)));
    }
  }
  return m;
}

}  // namespace

Solution minimize(const Functional& F, const SolverSettings& settings, const ScalarField* init) {
  validate_settings(settings);
  const auto start = std::chrono::steady_clock::now();
  const Grid& g = F.bg->grid();
  ScalarField U = init != nullptr ? *init : ScalarField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (!F.is_free(i, j)) U.at(i, j) = F.boundary.at(i, j);
    }
  }
  if (free_sup(F, U) > 4.0 * F.L) U = truncate(F, U);

  Solution sol;
  sol.background = F.bg;
  sol.method = Method::Variational;
  auto& diag = sol.diagnostics;
  auto finish = [&](const ScalarField& field) {
    sol.U = field;
    diag.residual = relative_residual(pde_defect(field, *F.bg), *F.bg);
    diag.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  Preconditioner precond(F);
  const double h2 = g.cell_area();
  const double lower = (1.0 + std::log(F.bg->lambda1)) * F.beta_mass();
  auto energy = [&](const ScalarField& field) {
    const double e = eval_functional(F, field);
    if (e < lower) ++diag.bound_violations;
    return e;
  };
  double I = energy(U);
  ScalarField grad = eval_gradient(F, U);
  diag.energies.push_back(I);
  for (int it = 0; it < settings.max_iterations; ++it) {
    const double gsup = free_sup(F, grad);
    if (gsup < settings.tolerance) {
      diag.iterations = it;
      finish(U);
      return sol;
    }
    std::vector<double> w;
    w.reserve(g.size());
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (F.is_free(i, j)) w.push_back(F.bg->r.at(i, j) * F.bg->beta_cells().at(i, j) * std::exp(U.at(i, j)));
      }
    }
    const double kappa = pairwise_sum(w) / static_cast<double>(w.size());
    const ScalarField p = precond.apply(grad, kappa);
    std::vector<double> gp(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) gp[k] = grad[k] * p[k];
    const double slope = h2 * pairwise_sum(gp);

    // the change is summed cell by cell so decreases far below the
    // rounding level of I itself still register
    double alpha = 1.0;
    bool accepted = false;
    ScalarField trial(g), d(g);
    double dI = 0.0;
    while (alpha > 1e-14) {
      for (std::size_t k = 0; k < g.size(); ++k) d[k] = -alpha * p[k];  // p is 0 on fixed cells
      dI = functional_change(F, U, d);
      if (std::isfinite(dI) && dI <= -1e-4 * alpha * slope && dI < 0.0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      diag.iterations = it;
      diag.update = 0.0;
      finish(U);
      throw NoConvergenceError("line search stalled with gradient " + std::to_string(gsup), sol);
    }
    for (std::size_t k = 0; k < g.size(); ++k) trial[k] = U[k] + d[k];
    double It = energy(trial);
    if (free_sup(F, trial) > 4.0 * F.L) {
      trial = truncate(F, trial);
      It = energy(trial);
      ++diag.clamps;
    }
    double du = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) du = std::max(du, std::abs(trial[k] - U[k]));
    U = std::move(trial);
    I = It;
    grad = eval_gradient(F, U);
    diag.update = du;
    diag.damping.push_back(alpha);
    diag.energies.push_back(I);
    diag.residuals.push_back(relative_residual(pde_defect(U, *F.bg), *F.bg));
  }
  diag.iterations = settings.max_iterations;
  finish(U);
  throw NoConvergenceError("variational minimization did not converge in " +
                               std::to_string(settings.max_iterations) + " iterations",
                           sol);
}

}  // namespace liouville
