#include "liouville/settings.hpp"

#include <cmath>

#include "liouville/error.hpp"

namespace liouville {

void validate_settings(const SolverSettings& s) {
  if (!(s.tolerance > 0.0) || !std::isfinite(s.tolerance)) {
    throw Error(ErrorCode::InvalidConfiguration, "tolerance must be positive");
  }
  if (!(s.damping > 0.0 && s.damping <= 1.0)) {
    throw Error(ErrorCode::InvalidConfiguration, "damping must lie in (0, 1]");
  }
  if (s.grid < 8) throw Error(ErrorCode::InvalidConfiguration, "grid must be at least 8");
  if (s.max_iterations < 1) throw Error(ErrorCode::InvalidConfiguration, "max_iterations must be at least 1");
  if (s.truncation_radius < 0.0 || !std::isfinite(s.truncation_radius)) {
    throw Error(ErrorCode::InvalidConfiguration, "truncation_radius must be finite and non-negative");
  }
}

}  // namespace liouville
