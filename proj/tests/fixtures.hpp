#pragma once

#include <cmath>
#include <numbers>

#include "liouville/model.hpp"

namespace liouville::fixtures {

inline SourceConfiguration three_elliptic(double eta = 0.45) {
  SourceConfiguration c;
  for (int k = 0; k < 3; ++k) c.elliptic.push_back({std::polar(1.0, 2.0 * std::numbers::pi * k / 3.0), eta});
  return c;
}

inline SourceConfiguration three_parabolic() {
  SourceConfiguration c;
  for (int k = -1; k <= 1; ++k) c.parabolic.push_back({Complex{static_cast<double>(k), 0.0}});
  return c;
}

inline SourceConfiguration torus_one_elliptic(double eta = 0.25) {
  SourceConfiguration c;
  c.genus = 1;
  c.elliptic.push_back({Complex{0.5, 0.5}, eta});
  return c;
}

}  // namespace liouville::fixtures
