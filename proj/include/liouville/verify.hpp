#pragma once

#include <optional>
#include <string>
#include <vector>

#include "liouville/settings.hpp"
#include "liouville/solution.hpp"

namespace liouville {

struct AreaCheck {
  double area = 0.0;
  double target = 0.0;
  [[nodiscard]] double relative_error() const { return std::abs(area - target) / target; }
};

/// ∫e^φ over the chart. A smooth cutoff splits off a disk around each
/// source, integrated in polar form after substituting the singular
/// weight away (t = ρ^(2−4η) or t = −1/log ρ²); the rest is the midpoint rule.
[[nodiscard]] AreaCheck check_area(const Solution& sol);

/// Relative residual of Δ_hU + β̄ − rβ̄e^U, excluding the outer ring and a
/// collar of three cells around every patch.
[[nodiscard]] double check_residual(const Solution& sol);

struct SourceAsymptotics {
  bool elliptic = true;
  double expected_slope = 0.0;  // −2η for elliptic sources
  double fitted_slope = 0.0;    // coefficient of log ρ² in φ
  double drift = 0.0;           // compensated quantity, inner ring minus outer ring
  double inner_radius = 0.0;
  double outer_radius = 0.0;
};

struct Asymptotics {
  std::vector<SourceAsymptotics> sources;
  std::optional<double> far_field_drift;  // genus 0
};

/// Angular means of φ on rings around each patch (a = patch radius). Drift
/// compares the compensated quantity at min(4h, a/8) and a/2. The elliptic
/// slope is a least-squares fit of φ against log ρ² over ρ ∈ [1e-8, 1]·a/2,
/// where the bounded remainder cannot bias it appreciably.
[[nodiscard]] Asymptotics check_asymptotics(const Solution& sol);

/// L² norm (h²-weighted) of Δ_hφ − e^φ for the exact cone metric
/// e^φ = 8μ²|z|^(2μ−2)/(1 − |z|^(2μ))² on cells of an n × n grid over
/// [−0.8, 0.8]² whose centres lie in 0.2 ≤ |z| ≤ 0.8. `shift` is added to φ.
/// Requires 0 < μ ≤ 1.
[[nodiscard]] double cone_oracle(double mu, int n, double shift = 0.0);

struct UniquenessProbe {
  double spread = 0.0;        // max pairwise sup |φ_a − φ_b|
  double gap = 0.0;           // ¼|∫|∇d|² + ∫d(e^φ₂ − e^φ₁)| for the most distant pair
  double energy_scale = 0.0;  // ¼∫|∇U|² of the first solution
  long monotonicity_violations = 0;
  std::vector<Solution> solutions;
};

/// Solves from U = 0 and n − 1 seeded smooth random starts with sup ≤ L.
[[nodiscard]] UniquenessProbe uniqueness_probe(std::shared_ptr<const Background> bg, const SolverSettings& settings,
                                               int n_inits);

/// The probe's energy comparison for two solutions on the same background.
[[nodiscard]] UniquenessProbe compare_solutions(const Solution& a, const Solution& b);

struct FunctionalBounds {
  double lower = 0.0;      // (1 + log λ₁) ∫β
  double at_zero = 0.0;    // I[0]
  double upper = 0.0;      // λ₂ ∫β
  double at_solution = 0.0;
  [[nodiscard]] bool holds() const { return at_zero < upper && at_solution >= lower && at_zero >= lower; }
};

[[nodiscard]] FunctionalBounds check_functional_bounds(const Solution& sol);

struct Thresholds {
  double area = 0.02;
  double residual_factor = 10.0;  // × tolerance
  double slope = 0.02;
  double far_field = 0.1;
  double parabolic_drift = 0.3;  // loose: the remainder decays like 1/log ρ
  double spread_factor = 100.0;  // × tolerance
  double gap = 1e-4;             // × energy scale
};

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  AreaCheck area;
  double residual = 0.0;
  Asymptotics asymptotics;
  FunctionalBounds functional;
  std::optional<UniquenessProbe> uniqueness;
  std::vector<Check> checks;
  [[nodiscard]] bool pass() const;
};

/// Runs the checks on `sol`; `probe` is folded in when given.
[[nodiscard]] VerificationReport verify(const Solution& sol, const SolverSettings& settings,
                                        const UniquenessProbe* probe = nullptr, const Thresholds& limits = {});

}  // namespace liouville
