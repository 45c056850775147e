#pragma once

#include <cmath>
#include <numbers>
#include <string_view>
#include <vector>

#include "flatlab/error.hpp"
#include "flatlab/matrix.hpp"
#include "flatlab/words.hpp"

namespace flatlab {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

enum class EulerMode { Linear, Projective };

inline std::string_view to_string(EulerMode m) { return m == EulerMode::Linear ? "Linear" : "Projective"; }
inline double period_of(EulerMode m) { return m == EulerMode::Linear ? kTwoPi : kPi; }

inline double positive_mod(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Angle in [0, period) of g (cos x, sin x); period pi gives the action on lines.
inline double circle_angle(const Mat2<double>& g, double x, double period) {
  const double cx = std::cos(x), sx = std::sin(x);
  const double vx = g.a * cx + g.b * sx, vy = g.c * cx + g.d * sx;
  return positive_mod(std::atan2(vy, vx), period);
}

inline constexpr long kMaxSubdivisionSteps = 1L << 20;

namespace detail {

/// Increment of the monotone lift of g over [0, r], r in [0, period), found by
/// stepping with increments kept below period / 2. A wrapped increment below
/// -noise means the true one passed period / 2, so the step is halved.
inline double tracked_increment(const Mat2<double>& g, double r, double period) {
  const double noise = 1e-12 * period;
  double s = 0.0, total = 0.0, h = period / 16.0;
  double prev = circle_angle(g, 0.0, period);
  long steps = 0;
  while (s < r) {
    if (++steps > kMaxSubdivisionSteps) {
      throw Error(ErrorKind::SubdivisionLimit, "lift tracking needed more than 2^20 steps");
    }
    const double e = std::min(r, s + h);
    const double a = circle_angle(g, e, period);
    double delta = a - prev;
    if (delta >= period / 2) delta -= period;
    if (delta < -period / 2) delta += period;
    if (delta < -noise) {
      h *= 0.5;
      continue;
    }
    total += delta;
    prev = a;
    s = e;
    h *= 2.0;
  }
  return total;
}

}  // namespace detail

/// Monotone lift of the circle map of base, determined by its value at 0.
struct LiftedElement {
  Mat2<double> base;
  double lift_at_zero{0};
  double period{kTwoPi};

  /// Uses periodicity to reduce x into [0, period) before tracking.
  double eval(double x) const {
    double k = std::floor(x / period);
    double r = x - k * period;
    if (r >= period) {
      r = 0.0;
      k += 1.0;
    }
    return lift_at_zero + detail::tracked_increment(base, r, period) + k * period;
  }

  /// The lift of base^-1 that inverts eval.
  LiftedElement inverse() const {
    const Mat2<double> gi = base.inverse();
    const double c = circle_angle(gi, 0.0, period);
    const double y = eval(c);
    return {gi, c - std::round(y / period) * period, period};
  }

  /// (f * h)(x) = f(h(x)).
  friend LiftedElement operator*(const LiftedElement& f, const LiftedElement& h) {
    return {f.base * h.base, f.eval(h.lift_at_zero), f.period};
  }

  LiftedElement shifted(int turns) const { return {base, lift_at_zero + turns * period, period}; }
};

inline void require_orientation_preserving(const Mat2<double>& g) {
  if (!(g.det() > 0)) throw Error(ErrorKind::BadDeterminant, "circle action needs det > 0");
}

/// The lift whose value at 0 lies in [0, period).
inline LiftedElement canonical_lift(const Mat2<double>& g, double period) {
  require_orientation_preserving(g);
  return {g, circle_angle(g, 0.0, period), period};
}

inline double lift_track(const Mat2<double>& g, double x0, double period) {
  return canonical_lift(g, period).eval(x0);
}

/// Value at 0 of the product of the given letter lifts, applied right to left.
inline double word_lift(const std::vector<LiftedElement>& generator_lifts, const Word& w) {
  check_rank(w, static_cast<int>(generator_lifts.size()));
  std::vector<LiftedElement> inverses;
  inverses.reserve(generator_lifts.size());
  for (const auto& f : generator_lifts) inverses.push_back(f.inverse());
  double x = 0.0;
  for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
    const std::size_t i = static_cast<std::size_t>(it->gen - 1);
    x = (it->exp > 0 ? generator_lifts[i] : inverses[i]).eval(x);
  }
  return x;
}

inline std::vector<LiftedElement> canonical_lifts(const Representation& rep, double period) {
  if (!rep.is_planar()) throw Error(ErrorKind::InvalidInput, "lifts need an SL2 representation");
  std::vector<LiftedElement> out;
  for (const auto& g : rep.sl2_generators()) out.push_back(canonical_lift(g, period));
  return out;
}

inline double word_lift(const Representation& rep, const Word& w, double period) {
  return word_lift(canonical_lifts(rep, period), w);
}

struct EulerReport {
  long e{0};
  int genus{0};
  int bound{0};
  EulerMode mode{EulerMode::Projective};
  double raw_lift{0};
  bool satisfies{false};
};

inline constexpr double kNonIntegralTolerance = 1e-6;
inline constexpr double kRelatorTolerance = 1e-6;

/// Euler number from explicit generator lifts; the result does not depend on
/// which lifts are passed.
inline EulerReport euler_number(const Representation& rep, const std::vector<LiftedElement>& lifts, int genus,
                                EulerMode mode) {
  const double defect = surface_relator_defect(rep, genus);
  if (!(defect < kRelatorTolerance)) {
    throw Error(ErrorKind::RelatorFailed, "surface relator defect " + std::to_string(defect));
  }
  const double period = period_of(mode);
  EulerReport r;
  r.genus = genus;
  r.mode = mode;
  r.raw_lift = word_lift(lifts, commutator_product_word(genus));
  const double turns = r.raw_lift / period;
  const double rounded = std::round(turns);
  if (!(std::abs(turns - rounded) < kNonIntegralTolerance)) {
    throw Error(ErrorKind::NonIntegralLift, "commutator product lifts to " + std::to_string(turns) + " turns");
  }
  r.e = static_cast<long>(rounded);
  if (mode == EulerMode::Linear) {
    r.bound = genus - 1;
    r.satisfies = std::labs(r.e) < genus;
  } else {
    r.bound = 2 * genus - 2;
    r.satisfies = std::labs(r.e) <= 2 * genus - 2;
  }
  return r;
}

inline EulerReport euler_number(const Representation& rep, int genus, EulerMode mode) {
  if (rep.rank() != 2 * genus) {
    throw Error(ErrorKind::WrongGeneratorCount, "expected " + std::to_string(2 * genus) + " generators");
  }
  return euler_number(rep, canonical_lifts(rep, period_of(mode)), genus, mode);
}

/// (f^N(0)) / N.
inline double translation_number(const LiftedElement& f, int iterations) {
  if (iterations < 1) throw Error(ErrorKind::InvalidInput, "iterations must be positive");
  double x = 0.0;
  for (int i = 0; i < iterations; ++i) x = f.eval(x);
  return x / iterations;
}

/// Angle of P e1 for the positive factor P = sqrt(g^T g) of g = K P.
inline double polar_angle_correction(const Mat2<double>& g) {
  const Mat2<double> m = g.transpose() * g;
  const double s = std::sqrt(m.det());
  const double n = std::sqrt(m.trace() + 2.0 * s);
  const double p11 = (m.a + s) / n, p21 = m.c / n;
  return std::atan2(p21, p11);
}

/// Lift of the rotation factor K of g = K P, taken from a lift of g.
inline double polar_retraction(const LiftedElement& f) { return f.lift_at_zero - polar_angle_correction(f.base); }

/// |theta(g1 g2) - theta(g1) - theta(g2)| for the polar retraction theta on
/// the universal cover, using canonical lifts of g1 and g2.
inline double milnor_estimate_defect(const Mat2<double>& g1, const Mat2<double>& g2) {
  const LiftedElement f1 = canonical_lift(g1, kTwoPi);
  const LiftedElement f2 = canonical_lift(g2, kTwoPi);
  const LiftedElement f12 = f1 * f2;
  return std::abs(polar_retraction(f12) - polar_retraction(f1) - polar_retraction(f2));
}

/// Same quantity with theta replaced by the value of the lift at 0.
inline double displacement_defect(const Mat2<double>& g1, const Mat2<double>& g2) {
  const LiftedElement f1 = canonical_lift(g1, kTwoPi);
  const LiftedElement f2 = canonical_lift(g2, kTwoPi);
  return std::abs((f1 * f2).lift_at_zero - f1.lift_at_zero - f2.lift_at_zero);
}

struct WoodCheck {
  double a{0};
  double bound{0};
  bool ok{false};
};

/// a = lift at 0 of the m-fold commutator product, in full turns.
inline WoodCheck wood_bound_check(const Representation& rep, int m, EulerMode mode = EulerMode::Linear) {
  if (m < 1 || rep.rank() != 2 * m) {
    throw Error(ErrorKind::WrongGeneratorCount, "expected " + std::to_string(2 * m) + " generators");
  }
  const double period = period_of(mode);
  WoodCheck c;
  c.a = word_lift(rep, commutator_product_word(m), period) / period;
  c.bound = 2.0 * m - 1.0;
  c.ok = std::abs(c.a) < c.bound;
  return c;
}

struct Point2 {
  double x{0}, y{0};
  friend Point2 operator-(const Point2& p, const Point2& q) { return {p.x - q.x, p.y - q.y}; }
  friend Point2 operator+(const Point2& p, const Point2& q) { return {p.x + q.x, p.y + q.y}; }
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// x -> linear x + trans on the plane.
struct PlaneAffineMap {
  Mat2<double> linear = Mat2<double>::identity();
  Point2 trans;
  Point2 operator()(const Point2& p) const {
    return {linear.a * p.x + linear.b * p.y + trans.x, linear.c * p.x + linear.d * p.y + trans.y};
  }
};

inline constexpr double kDegenerateAngle = 1e-12;

namespace detail {

inline std::vector<Point2> closed_vertices(std::vector<Point2> p) {
  if (p.size() >= 2 && p.front() == p.back()) p.pop_back();
  if (p.size() < 3) throw Error(ErrorKind::DegenerateVertex, "closed polyline needs at least 3 vertices");
  return p;
}

/// Exterior angle at each vertex, in (-pi, pi); index i is the turn from
/// edge i-1 into edge i.
inline std::vector<double> exterior_angles(const std::vector<Point2>& p) {
  const std::size_t n = p.size();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 e0 = p[i] - p[(i + n - 1) % n];
    const Point2 e1 = p[(i + 1) % n] - p[i];
    if ((e0.x == 0 && e0.y == 0) || (e1.x == 0 && e1.y == 0)) {
      throw Error(ErrorKind::DegenerateVertex, "zero-length edge at vertex " + std::to_string(i));
    }
    const double ang = std::atan2(e0.x * e1.y - e0.y * e1.x, e0.x * e1.x + e0.y * e1.y);
    if (std::abs(ang) >= kPi - kDegenerateAngle) {
      throw Error(ErrorKind::DegenerateVertex, "edge reverses direction at vertex " + std::to_string(i));
    }
    out[i] = ang;
  }
  return out;
}

/// Continuous tangent-angle lift at edges 0..n (edge n is edge 0 again).
inline std::vector<double> tangent_lift(const std::vector<Point2>& p) {
  const std::vector<double> ext = exterior_angles(p);
  const std::size_t n = p.size();
  const Point2 e0 = p[1] - p[0];
  std::vector<double> phi(n + 1);
  phi[0] = std::atan2(e0.y, e0.x);
  for (std::size_t k = 1; k <= n; ++k) phi[k] = phi[k - 1] + ext[k % n];
  return phi;
}

}  // namespace detail

/// Sum of exterior angles over 2 pi. A trailing copy of the first vertex is ignored.
inline double turning_number(const std::vector<Point2>& polyline) {
  const std::vector<Point2> p = detail::closed_vertices(polyline);
  double sum = 0.0;
  for (double a : detail::exterior_angles(p)) sum += a;
  return sum / kTwoPi;
}

/// sup over sub-arcs of |turning of p - turning of gamma(p)|, from the
/// accumulated tangent-angle lifts of both polylines.
inline double benzecri_defect(const std::vector<Point2>& polyline, const PlaneAffineMap& gamma) {
  if (!(gamma.linear.det() > 0)) throw Error(ErrorKind::BadDeterminant, "map must preserve orientation");
  const std::vector<Point2> p = detail::closed_vertices(polyline);
  std::vector<Point2> q;
  q.reserve(p.size());
  for (const Point2& v : p) q.push_back(gamma(v));
  const std::vector<double> phi = detail::tangent_lift(p);
  const std::vector<double> psi = detail::tangent_lift(q);
  double lo = phi[0] - psi[0], hi = lo;
  for (std::size_t k = 1; k < phi.size(); ++k) {
    const double d = phi[k] - psi[k];
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  return hi - lo;
}

}  // namespace flatlab
