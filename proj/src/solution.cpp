#include "liouville/solution.hpp"

#include <cmath>

namespace liouville {

ScalarField Solution::phi() const {
  ScalarField out(grid());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = background->v[k] + U[k];
  return out;
}

double Solution::phi_at(Complex z) const { return background->v_at(z) + interpolate_bicubic(U, z); }

ScalarField pde_defect(const ScalarField& U, const Background& bg) {
  const Grid& g = U.grid();
  const double inv_h2 = 1.0 / (g.spacing * g.spacing);
  const ScalarField& beta = bg.beta_cells();
  ScalarField out(g);
  const int lo = g.periodic ? 0 : 1;
  for (int j = lo; j < g.ny - lo; ++j) {
    const int jm = (j + g.ny - 1) % g.ny, jp = (j + 1) % g.ny;
    for (int i = lo; i < g.nx - lo; ++i) {
      const int im = (i + g.nx - 1) % g.nx, ip = (i + 1) % g.nx;
      const double u = U.at(i, j);
      const double lap = (U.at(ip, j) + U.at(im, j) + U.at(i, jp) + U.at(i, jm) - 4.0 * u) * inv_h2;
      const double b = beta.at(i, j);
      out.at(i, j) = lap + b - bg.r.at(i, j) * b * std::exp(u);
    }
  }
  return out;
}

double relative_residual(const ScalarField& defect, const Background& bg, const std::vector<unsigned char>* mask) {
  const Grid& g = defect.grid();
  const int lo = g.periodic ? 0 : 1;
  if (mask == nullptr && bg.residual_mask.size() == g.size()) mask = &bg.residual_mask;
  std::vector<double> num, den;
  num.reserve(g.size());
  den.reserve(g.size());
  for (int j = lo; j < g.ny - lo; ++j) {
    for (int i = lo; i < g.nx - lo; ++i) {
      const std::size_t k = g.index(i, j);
      if (mask != nullptr && (*mask)[k] == 0) continue;
      num.push_back(defect[k] * defect[k]);
      den.push_back(bg.beta_cells()[k] * bg.beta_cells()[k]);
    }
  }
  const double d = pairwise_sum(den);
  return d > 0.0 ? std::sqrt(pairwise_sum(num) / d) : 0.0;
}

}  // namespace liouville
