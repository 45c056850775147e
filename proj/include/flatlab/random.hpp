#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "flatlab/lorentz.hpp"
#include "flatlab/matrix.hpp"

namespace flatlab {

/// Seeded generator with a portable uniform mapping, so sampled reports are
/// identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi) { return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1)); }
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 engine_;
};

/// det-1 matrix with a, b, c uniform in [-r, r] and d = (1 + bc) / a also in [-r, r].
inline Mat2<double> random_sl2(Rng& rng, double r = 10.0) {
  for (;;) {
    const double a = rng.uniform(-r, r), b = rng.uniform(-r, r), c = rng.uniform(-r, r);
    if (std::abs(a) < 1e-3) continue;
    const double d = (1.0 + b * c) / a;
    if (std::abs(d) <= r) return {a, b, c, d};
  }
}

inline LorentzVector random_vector(Rng& rng, double r) {
  return {rng.uniform(-r, r), rng.uniform(-r, r), rng.uniform(-r, r)};
}

}  // namespace flatlab
