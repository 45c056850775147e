#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "flatlab/matrix.hpp"

namespace flatlab::fixtures {

/// SL2 matrix acting on the upper half plane as a rotation by t about i.
inline Mat2<double> half_rotation(double t) {
  const double c = std::cos(t / 2.0), s = std::sin(t / 2.0);
  return {c, s, -s, c};
}

/// Side pairings of the regular hyperbolic octagon with interior angles
/// pi/4. Side k has its midpoint in direction k pi/4; pair(i, j) maps side j
/// onto side i. Returns A1, B1, A2, B2 with A1 B1 A1^-1 B1^-1 A2 B2 A2^-1 B2^-1 = I
/// in SL2 up to rounding.
inline std::vector<Mat2<double>> octagon_generators() {
  const double d = std::acosh(1.0 + std::sqrt(2.0));
  const Mat2<double> h = Mat2<double>::diagonal(std::exp(d), std::exp(-d));
  auto theta = [](int k) { return k * std::numbers::pi / 4.0; };
  auto pair = [&](int i, int j) { return half_rotation(theta(i)) * h * half_rotation(std::numbers::pi - theta(j)); };
  return {pair(0, 2), pair(1, 3).inverse(), pair(4, 6), pair(5, 7).inverse()};
}

}  // namespace flatlab::fixtures
