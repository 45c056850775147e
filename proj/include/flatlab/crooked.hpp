#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "flatlab/error.hpp"
#include "flatlab/euler.hpp"
#include "flatlab/lorentz.hpp"
#include "flatlab/margulis.hpp"
#include "flatlab/random.hpp"
#include "flatlab/words.hpp"

namespace flatlab {

/// Crooked plane with vertex p and unit spacelike director v. The surface is
///   Stem = {p + w : B(w, v) = 0, B(w, w) <= 0}
///   W+   = {p + a n+ + b v : b >= 0}
///   W-   = {p + a n- + b v : b <= 0}
/// where n-, n+ are the future null vectors of v-perp with z = 1 and
/// det[v | n- | n+] > 0.
struct CrookedPlane {
  LorentzVector p;
  LorentzVector v;
  LorentzVector nminus;
  LorentzVector nplus;
};

enum class Side { Plus, Minus, OnSurface };

inline std::string_view to_string(Side s) {
  switch (s) {
    case Side::Plus: return "Plus";
    case Side::Minus: return "Minus";
    case Side::OnSurface: return "OnSurface";
  }
  return "Unknown";
}

inline Side opposite(Side s) {
  if (s == Side::Plus) return Side::Minus;
  if (s == Side::Minus) return Side::Plus;
  return s;
}

struct CrookedHalfspace {
  CrookedPlane plane;
  Side side{Side::Plus};
};

inline CrookedPlane make_crooked_plane(const LorentzVector& p, const LorentzVector& v) {
  if (causal_class(v) != CausalClass::Spacelike) {
    throw Error(ErrorKind::NotSpacelike, "crooked plane director must be spacelike");
  }
  CrookedPlane c;
  c.p = p;
  c.v = v / std::sqrt(bilinear_form(v, v));
  // Null w = (x, y, 1) in v-perp: x v.x + y v.y = v.z on the unit circle.
  const double r = std::hypot(c.v.x, c.v.y);
  const double d = c.v.z / r;
  const double h = std::sqrt(std::max(0.0, 1.0 - d * d));
  const double ux = c.v.x / r, uy = c.v.y / r;
  const LorentzVector n1{d * ux - h * uy, d * uy + h * ux, 1.0};
  const LorentzVector n2{d * ux + h * uy, d * uy - h * ux, 1.0};
  if (det3(c.v, n1, n2) > 0) {
    c.nminus = n1;
    c.nplus = n2;
  } else {
    c.nminus = n2;
    c.nplus = n1;
  }
  return c;
}

/// Case table on w = q - p with u+- = B(w, n+-) and y = B(w, v), all divided
/// by |w|:
///   u+ < 0, u- < 0: sign of y;   u+ > 0, u- > 0: sign of -y;
///   u+ < 0 < u-: Plus;           u- < 0 < u+: Minus.
/// Values within tau of the stem or a wing give OnSurface.
inline Side classify_point(const CrookedPlane& c, const LorentzVector& q, double tau = tol::surf) {
  const LorentzVector w = q - c.p;
  const double s = w.euclidean_norm();
  if (s <= tau) return Side::OnSurface;
  const double up = bilinear_form(w, c.nplus) / s;
  const double um = bilinear_form(w, c.nminus) / s;
  const double y = bilinear_form(w, c.v) / s;

  if (std::abs(y) <= tau && up * um >= -tau * tau) return Side::OnSurface;
  if (std::abs(up) <= tau && y >= -tau) return Side::OnSurface;
  if (std::abs(um) <= tau && y <= tau) return Side::OnSurface;

  // Off the surface with u+ = 0 forces y < 0, and u- = 0 forces y > 0; the
  // table is continuous across those planes.
  if (std::abs(up) <= tau) return um > 0 ? Side::Plus : Side::Minus;
  if (std::abs(um) <= tau) return up < 0 ? Side::Plus : Side::Minus;

  if (up < 0 && um < 0) return y > 0 ? Side::Plus : Side::Minus;
  if (up > 0 && um > 0) return y < 0 ? Side::Plus : Side::Minus;
  if (up < 0) return Side::Plus;
  return Side::Minus;
}

inline bool contains(const CrookedHalfspace& h, const LorentzVector& q) { return classify_point(h.plane, q) == h.side; }

/// Image of a crooked plane under an affine map.
inline CrookedPlane transport(const AffineMap& g, const CrookedPlane& c) {
  return make_crooked_plane(g(c.p), g.linear * c.v);
}

/// Bisects a segment whose endpoints lie on opposite open sides. Returns a
/// point classified OnSurface, either exactly during bisection or, once the
/// defining functionals vary by at most tol along the segment, with the
/// tolerance widened to tol in absolute terms.
inline std::optional<LorentzVector> bisect_crossing(const CrookedPlane& c, LorentzVector a, LorentzVector b,
                                                    double tol = 1e-8) {
  const Side sa = classify_point(c, a);
  const Side sb = classify_point(c, b);
  if (sa == Side::OnSurface) return a;
  if (sb == Side::OnSurface) return b;
  if (sa == sb) return std::nullopt;
  const double gain = std::max({c.v.euclidean_norm(), c.nplus.euclidean_norm(), c.nminus.euclidean_norm()});
  for (int it = 0; it < 200; ++it) {
    const LorentzVector m = 0.5 * (a + b);
    const Side sm = classify_point(c, m);
    if (sm == Side::OnSurface) return m;
    (sm == sa ? a : b) = m;
    if ((b - a).euclidean_norm() * gain <= tol) break;
  }
  const LorentzVector m = 0.5 * (a + b);
  const double r = std::max((m - c.p).euclidean_norm(), tol);
  if (classify_point(c, m, tol / r) == Side::OnSurface) return m;
  return std::nullopt;
}

struct DisjointResult {
  bool overlap{false};
  LorentzVector point;
  long tested{0};
};

namespace detail {

inline double radical_inverse(unsigned long i, unsigned base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

/// Random point of the surface of c within roughly extent of its vertex.
inline LorentzVector surface_sample(const CrookedPlane& c, Rng& rng, double extent) {
  const int piece = rng.integer(0, 2);
  if (piece == 0) {
    const double sgn = rng.uniform() < 0.5 ? -1.0 : 1.0;
    return c.p + (sgn * rng.uniform(0, extent)) * c.nplus + (sgn * rng.uniform(0, extent)) * c.nminus;
  }
  const double a = rng.uniform(-extent, extent), b = rng.uniform(0, extent);
  if (piece == 1) return c.p + a * c.nplus + b * c.v;
  return c.p + a * c.nminus - b * c.v;
}

}  // namespace detail

/// Seeded falsifier: a randomly shifted Halton sequence in [-extent, extent]^3
/// interleaved with points scattered just off both surfaces. Returns the first
/// point inside both open halfspaces.
inline DisjointResult crooked_disjoint_sampled(const CrookedHalfspace& h1, const CrookedHalfspace& h2, double extent,
                                               long n_samples, std::uint64_t seed) {
  if (!(extent > 0) || n_samples < 1) throw Error(ErrorKind::InvalidInput, "need extent > 0 and n_samples >= 1");
  Rng rng(seed);
  const std::array<double, 3> shift{rng.uniform(), rng.uniform(), rng.uniform()};
  DisjointResult r;
  auto test = [&](const LorentzVector& q) {
    ++r.tested;
    if (contains(h1, q) && contains(h2, q)) {
      r.overlap = true;
      r.point = q;
    }
    return r.overlap;
  };
  for (long k = 0; k < n_samples; ++k) {
    const auto i = static_cast<unsigned long>(k + 1);
    const LorentzVector q{(2.0 * std::fmod(detail::radical_inverse(i, 2) + shift[0], 1.0) - 1.0) * extent,
                          (2.0 * std::fmod(detail::radical_inverse(i, 3) + shift[1], 1.0) - 1.0) * extent,
                          (2.0 * std::fmod(detail::radical_inverse(i, 5) + shift[2], 1.0) - 1.0) * extent};
    if (test(q)) return r;
    if (k % 2 == 0) {
      const CrookedPlane& c = (k % 4 == 0) ? h1.plane : h2.plane;
      const LorentzVector s = detail::surface_sample(c, rng, extent);
      const double eps = extent * 1e-3 * rng.uniform();
      LorentzVector dir{rng.normal(), rng.normal(), rng.normal()};
      dir = dir / std::max(dir.euclidean_norm(), 1e-300);
      if (test(s + eps * dir)) return r;
    }
  }
  return r;
}

/// Outer halfspaces of a slab for one generator a: a maps the complement of
/// minus onto the closure of plus.
struct SlabPair {
  CrookedHalfspace minus;
  CrookedHalfspace plus;
};

/// Crooked slab for an affine boost with alpha > 0. In normal-form
/// coordinates the lower plane is C(-(alpha/2) x0, u) with u the image of
/// (1, 0, 0) under the half boost inverse, and the upper plane is its image.
inline SlabPair drumm_slab(const AffineMap& g) {
  const BoostNormalForm nf = boost_normal_form(g);
  if (!(nf.alpha > 0)) {
    throw Error(ErrorKind::InvalidInput, "slab construction needs a positive Margulis invariant");
  }
  const AffineMap normal = affine_boost(nf.ell, nf.alpha);
  const LorentzVector u = standard_boost(-nf.ell / 2) * LorentzVector{1.0, 0.0, 0.0};
  const CrookedPlane lower = make_crooked_plane({0.0, -nf.alpha / 2, 0.0}, u);
  const CrookedPlane upper = transport(normal, lower);
  return {{transport(nf.frame_change, lower), Side::Minus}, {transport(nf.frame_change, upper), Side::Plus}};
}

struct OrbitRecovery {
  LorentzVector point;
  Word word;
  int steps{0};
  bool recovered{false};
  std::optional<ErrorKind> error;
};

/// Greedy ping-pong: a point in the plus halfspace of generator i is pulled
/// back by a_i^-1, a point in the minus halfspace is pushed by a_i. The
/// returned word w satisfies evaluate_affine(w)(q) = point.
inline OrbitRecovery slab_recover(const AffineDeformation& def, const std::vector<SlabPair>& slabs,
                                  const LorentzVector& q, int max_steps) {
  if (static_cast<int>(slabs.size()) != def.rank()) {
    throw Error(ErrorKind::WrongGeneratorCount, "need one slab per generator");
  }
  if (max_steps < 1) throw Error(ErrorKind::InvalidInput, "max_steps must be positive");
  OrbitRecovery r;
  r.point = q;
  std::vector<AffineMap> inverses;
  for (const auto& g : def.generators()) inverses.push_back(g.inverse());
  for (;;) {
    int letter_gen = 0, letter_exp = 0;
    for (std::size_t i = 0; i < slabs.size() && letter_gen == 0; ++i) {
      if (contains(slabs[i].plus, r.point)) {
        letter_gen = static_cast<int>(i) + 1;
        letter_exp = -1;
      } else if (contains(slabs[i].minus, r.point)) {
        letter_gen = static_cast<int>(i) + 1;
        letter_exp = 1;
      }
    }
    if (letter_gen == 0) {
      r.recovered = true;
      return r;
    }
    if (r.steps >= max_steps) {
      r.error = ErrorKind::DepthExceeded;
      return r;
    }
    const std::size_t i = static_cast<std::size_t>(letter_gen - 1);
    r.point = letter_exp > 0 ? def.generators()[i](r.point) : inverses[i](r.point);
    r.word = generator_word(letter_gen, letter_exp) * r.word;
    ++r.steps;
  }
}

struct SlicePlane {
  int axis{2};  // 0: x = value, 1: y = value, 2: z = value
  double value{0};
};

using Polyline = std::vector<Point2>;

namespace detail {

inline Point2 in_plane(const LorentzVector& q, int axis) {
  if (axis == 0) return {q.y, q.z};
  if (axis == 1) return {q.x, q.z};
  return {q.x, q.y};
}

/// Convex cone piece {p + s e1 + t e2 : cs_k s + ct_k t >= 0 for each k}.
struct ConePiece {
  LorentzVector e1, e2;
  std::vector<std::array<double, 2>> constraints;
};

inline std::vector<ConePiece> pieces(const CrookedPlane& c) {
  return {{c.nplus, c.nminus, {{1, 0}, {0, 1}}},
          {c.nplus, c.nminus, {{-1, 0}, {0, -1}}},
          {c.nplus, c.v, {{0, 1}}},
          {c.nminus, c.v, {{0, -1}}}};
}

struct Segment {
  Point2 a, b;
};

/// Clips q0 + lambda qd, lambda in [lo, hi], to the square |x|, |y| <= extent.
inline std::optional<Segment> clip_to_box(Point2 q0, Point2 qd, double lo, double hi, double extent) {
  const double pd[4] = {-qd.x, qd.x, -qd.y, qd.y};
  const double qv[4] = {q0.x + extent, extent - q0.x, q0.y + extent, extent - q0.y};
  for (int k = 0; k < 4; ++k) {
    if (pd[k] == 0) {
      if (qv[k] < 0) return std::nullopt;
      continue;
    }
    const double t = qv[k] / pd[k];
    if (pd[k] < 0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) return std::nullopt;
  const Point2 a{q0.x + lo * qd.x, q0.y + lo * qd.y};
  const Point2 b{q0.x + hi * qd.x, q0.y + hi * qd.y};
  if (std::hypot(b.x - a.x, b.y - a.y) <= 1e-12 * std::max(1.0, extent)) return std::nullopt;
  return Segment{a, b};
}

inline std::optional<Segment> clip_ray(const LorentzVector& origin, const LorentzVector& dir, double lo, double hi,
                                       int axis, double extent) {
  return clip_to_box(in_plane(origin, axis), in_plane(dir, axis), lo, hi, extent);
}

inline void slice_piece(const CrookedPlane& c, const ConePiece& piece, const SlicePlane& plane, double extent,
                        std::vector<Segment>& out) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double alpha = piece.e1[plane.axis], beta = piece.e2[plane.axis];
  const double gamma = plane.value - c.p[plane.axis];
  const double scale = std::max(1.0, std::abs(gamma));
  // A stem lying inside the slicing plane is represented by its boundary,
  // which the wings already contribute.
  if (std::abs(alpha) <= 1e-14 && std::abs(beta) <= 1e-14) return;
  const double n2 = alpha * alpha + beta * beta;
  const double s0 = gamma * alpha / n2, t0 = gamma * beta / n2;
  const double ds = -beta, dt = alpha;
  double lo = -inf, hi = inf;
  for (const auto& con : piece.constraints) {
    const double base = con[0] * s0 + con[1] * t0;
    const double rate = con[0] * ds + con[1] * dt;
    if (rate == 0) {
      if (base < -1e-12 * scale) return;
      continue;
    }
    const double t = -base / rate;
    if (rate > 0) {
      lo = std::max(lo, t);
    } else {
      hi = std::min(hi, t);
    }
  }
  if (lo > hi) return;
  const LorentzVector origin = c.p + s0 * piece.e1 + t0 * piece.e2;
  if (auto seg = clip_ray(origin, ds * piece.e1 + dt * piece.e2, lo, hi, plane.axis, extent)) out.push_back(*seg);
}

inline bool close(const Point2& a, const Point2& b, double eps) { return std::hypot(a.x - b.x, a.y - b.y) <= eps; }

/// Chains segments sharing endpoints into maximal polylines.
inline std::vector<Polyline> join_segments(std::vector<Segment> segs, double eps) {
  std::vector<Polyline> out;
  std::vector<bool> used(segs.size(), false);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    std::vector<Point2> line{segs[i].a, segs[i].b};
    bool grown = true;
    while (grown) {
      grown = false;
      for (std::size_t j = 0; j < segs.size(); ++j) {
        if (used[j]) continue;
        const Segment& s = segs[j];
        if (close(line.back(), s.a, eps)) {
          line.push_back(s.b);
        } else if (close(line.back(), s.b, eps)) {
          line.push_back(s.a);
        } else if (close(line.front(), s.b, eps)) {
          line.insert(line.begin(), s.a);
        } else if (close(line.front(), s.a, eps)) {
          line.insert(line.begin(), s.b);
        } else {
          continue;
        }
        used[j] = true;
        grown = true;
      }
    }
    // Drop interior vertices where consecutive pieces are collinear.
    Polyline clean{line.front()};
    for (std::size_t k = 1; k + 1 < line.size(); ++k) {
      const Point2 d0 = line[k] - clean.back(), d1 = line[k + 1] - line[k];
      const double cross = d0.x * d1.y - d0.y * d1.x;
      if (std::abs(cross) > eps * (std::hypot(d0.x, d0.y) + std::hypot(d1.x, d1.y))) clean.push_back(line[k]);
    }
    clean.push_back(line.back());
    const Point2 f = clean.front(), b = clean.back();
    if (b.x < f.x || (b.x == f.x && b.y < f.y)) std::reverse(clean.begin(), clean.end());
    out.push_back(std::move(clean));
  }
  return out;
}

}  // namespace detail

/// Intersection of the surface with a coordinate plane, clipped to the square
/// [-extent, extent]^2 in the remaining two coordinates (in x, y, z order).
inline std::vector<Polyline> slice_polylines(const CrookedPlane& c, const SlicePlane& plane, double extent) {
  if (!(extent > 0)) throw Error(ErrorKind::InvalidInput, "extent must be positive");
  if (plane.axis < 0 || plane.axis > 2) throw Error(ErrorKind::InvalidInput, "slice axis must be x, y or z");
  std::vector<detail::Segment> segs;
  for (const auto& piece : detail::pieces(c)) detail::slice_piece(c, piece, plane, extent, segs);
  return detail::join_segments(std::move(segs), 1e-9 * std::max(1.0, extent));
}

}  // namespace flatlab
