#pragma once

#include <cmath>
#include <ostream>
#include <string_view>

#include "flatlab/error.hpp"
#include "flatlab/matrix.hpp"
#include "flatlab/rational.hpp"

namespace flatlab {

namespace tol {
inline constexpr double null = 1e-9;
inline constexpr double klass = 1e-9;
inline constexpr double ortho = 1e-8;
inline constexpr double frame = 1e-8;
inline constexpr double sign = 1e-7;
inline constexpr double surf = 1e-9;
}  // namespace tol

/// Vector of Minkowski 3-space; z is the timelike coordinate.
struct LorentzVector {
  double x{0}, y{0}, z{0};

  friend LorentzVector operator+(const LorentzVector& u, const LorentzVector& v) {
    return {u.x + v.x, u.y + v.y, u.z + v.z};
  }
  friend LorentzVector operator-(const LorentzVector& u, const LorentzVector& v) {
    return {u.x - v.x, u.y - v.y, u.z - v.z};
  }
  LorentzVector operator-() const { return {-x, -y, -z}; }
  friend LorentzVector operator*(double s, const LorentzVector& v) { return {s * v.x, s * v.y, s * v.z}; }
  friend LorentzVector operator*(const LorentzVector& v, double s) { return s * v; }
  friend LorentzVector operator/(const LorentzVector& v, double s) { return {v.x / s, v.y / s, v.z / s}; }
  friend bool operator==(const LorentzVector&, const LorentzVector&) = default;

  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  double euclidean_norm() const { return std::sqrt(x * x + y * y + z * z); }
};

inline std::ostream& operator<<(std::ostream& os, const LorentzVector& v) {
  return os << "(" << v.x << ", " << v.y << ", " << v.z << ")";
}

inline double max_abs_diff(const LorentzVector& u, const LorentzVector& v) {
  return std::max({std::abs(u.x - v.x), std::abs(u.y - v.y), std::abs(u.z - v.z)});
}

/// B(u, v) = u.x v.x + u.y v.y - u.z v.z.
inline double bilinear_form(const LorentzVector& u, const LorentzVector& v) {
  return u.x * v.x + u.y * v.y - u.z * v.z;
}

enum class CausalClass { Spacelike, Null, Timelike };

inline std::string_view to_string(CausalClass c) {
  switch (c) {
    case CausalClass::Spacelike: return "Spacelike";
    case CausalClass::Null: return "Null";
    case CausalClass::Timelike: return "Timelike";
  }
  return "Unknown";
}

/// Sign of B(w,w) / |w|^2 against tol::null. The zero vector counts as null.
inline CausalClass causal_class(const LorentzVector& w) {
  const double n2 = w.x * w.x + w.y * w.y + w.z * w.z;
  if (n2 == 0.0) return CausalClass::Null;
  const double q = bilinear_form(w, w) / n2;
  if (q > tol::null) return CausalClass::Spacelike;
  if (q < -tol::null) return CausalClass::Timelike;
  return CausalClass::Null;
}

/// det[u | v | w] with the vectors as columns.
inline double det3(const LorentzVector& u, const LorentzVector& v, const LorentzVector& w) {
  return u.x * (v.y * w.z - v.z * w.y) - v.x * (u.y * w.z - u.z * w.y) + w.x * (u.y * v.z - u.z * v.y);
}

/// Lorentzian cross product, characterized by B(u x v, w) = det[u | v | w].
inline LorentzVector lorentz_cross(const LorentzVector& u, const LorentzVector& v) {
  return {u.y * v.z - u.z * v.y, u.z * v.x - u.x * v.z, -(u.x * v.y - u.y * v.x)};
}

/// Matrix of w -> v x w; an element of the Lie algebra of SO(2,1).
inline Mat3<double> cross_matrix(const LorentzVector& v) {
  Mat3<double> m;
  m.e = {{{0.0, -v.z, v.y}, {v.z, 0.0, -v.x}, {v.y, -v.x, 0.0}}};
  return m;
}

inline const Mat3<double>& lorentz_gram() {
  static const Mat3<double> g = Mat3<double>::diagonal(1.0, 1.0, -1.0);
  return g;
}

inline LorentzVector operator*(const Mat3<double>& m, const LorentzVector& v) {
  return {m.e[0][0] * v.x + m.e[0][1] * v.y + m.e[0][2] * v.z,
          m.e[1][0] * v.x + m.e[1][1] * v.y + m.e[1][2] * v.z,
          m.e[2][0] * v.x + m.e[2][1] * v.y + m.e[2][2] * v.z};
}

inline Mat3<double> from_columns(const LorentzVector& a, const LorentzVector& b, const LorentzVector& c) {
  Mat3<double> m;
  m.e = {{{a.x, b.x, c.x}, {a.y, b.y, c.y}, {a.z, b.z, c.z}}};
  return m;
}

inline LorentzVector column(const Mat3<double>& m, int j) { return {m.e[0][j], m.e[1][j], m.e[2][j]}; }

/// Element of O(2,1).
class LorentzIsometry {
 public:
  LorentzIsometry() : m_(Mat3<double>::identity()) {}

  /// Throws NotIsometry unless m^T G m = G entrywise within tol::ortho,
  /// scaled by the size of m.
  explicit LorentzIsometry(const Mat3<double>& m) : m_(m) {
    const Mat3<double>& g = lorentz_gram();
    const double scale = std::max(1.0, max_abs(m) * max_abs(m));
    if (max_abs_diff(m.transpose() * g * m, g) > tol::ortho * scale) {
      throw Error(ErrorKind::NotIsometry, "matrix does not preserve the Lorentz form");
    }
  }

  static LorentzIsometry unchecked(const Mat3<double>& m) {
    LorentzIsometry r;
    r.m_ = m;
    return r;
  }

  const Mat3<double>& matrix() const { return m_; }
  double trace() const { return m_.trace(); }

  /// G m^T G, exact for isometries.
  LorentzIsometry inverse() const {
    const Mat3<double>& g = lorentz_gram();
    return unchecked(g * m_.transpose() * g);
  }

  LorentzVector operator()(const LorentzVector& v) const { return m_ * v; }
  friend LorentzVector operator*(const LorentzIsometry& h, const LorentzVector& v) { return h.m_ * v; }
  friend LorentzIsometry operator*(const LorentzIsometry& a, const LorentzIsometry& b) {
    return unchecked(a.m_ * b.m_);
  }

 private:
  Mat3<double> m_;
};

inline double max_abs_diff(const LorentzIsometry& a, const LorentzIsometry& b) {
  return max_abs_diff(a.matrix(), b.matrix());
}

enum class IsometryClass { Hyperbolic, Parabolic, Elliptic, Identity };

inline std::string_view to_string(IsometryClass c) {
  switch (c) {
    case IsometryClass::Hyperbolic: return "Hyperbolic";
    case IsometryClass::Parabolic: return "Parabolic";
    case IsometryClass::Elliptic: return "Elliptic";
    case IsometryClass::Identity: return "Identity";
  }
  return "Unknown";
}

template <class T>
using SL2Matrix = Mat2<T>;

template <class T>
Mat2<double> to_double(const Mat2<T>& g) {
  return {to_double(g.a), to_double(g.b), to_double(g.c), to_double(g.d)};
}

/// Classification by |tr g| against 2 with tolerance tol::klass.
template <class T>
IsometryClass classify_sl2(const Mat2<T>& g) {
  const Mat2<double> h = to_double(g);
  const bool plus_i = h.a == 1.0 && h.d == 1.0 && h.b == 0.0 && h.c == 0.0;
  const bool minus_i = h.a == -1.0 && h.d == -1.0 && h.b == 0.0 && h.c == 0.0;
  if (plus_i || minus_i) return IsometryClass::Identity;
  const double t = std::abs(h.trace());
  if (t > 2.0 + tol::klass) return IsometryClass::Hyperbolic;
  if (t < 2.0 - tol::klass) return IsometryClass::Elliptic;
  return IsometryClass::Parabolic;
}

/// Classification of an orthochronous isometry by tr = 1 + 2 cosh(l).
inline IsometryClass classify_so21(const LorentzIsometry& h) {
  if (max_abs_diff(h.matrix(), Mat3<double>::identity()) <= tol::klass) return IsometryClass::Identity;
  const double t = h.trace();
  if (t > 3.0 + tol::klass) return IsometryClass::Hyperbolic;
  if (t < 3.0 - tol::klass) return IsometryClass::Elliptic;
  return IsometryClass::Parabolic;
}

/// Matrix of S -> g S g^T in the coordinates (X, Y, Z) = ((a-c)/2, b, (a+c)/2)
/// of S = [[a, b], [b, c]]. Exact when T is exact.
template <class T>
Mat3<T> adjoint_matrix(const Mat2<T>& g) {
  auto to_sym = [](const T& X, const T& Y, const T& Z) { return Mat2<T>{Z + X, Y, Y, Z - X}; };
  const T half = T(1) / T(2);
  Mat3<T> m;
  const T basis[3][3] = {{T(1), T(0), T(0)}, {T(0), T(1), T(0)}, {T(0), T(0), T(1)}};
  for (int j = 0; j < 3; ++j) {
    const Mat2<T> s = to_sym(basis[j][0], basis[j][1], basis[j][2]);
    const Mat2<T> img = g * s * g.transpose();
    m.e[0][j] = (img.a - img.d) * half;
    m.e[1][j] = img.b;
    m.e[2][j] = (img.a + img.d) * half;
  }
  return m;
}

template <class T>
LorentzIsometry sl2_to_so21(const Mat2<T>& g) {
  const Mat3<T> m = adjoint_matrix(g);
  Mat3<double> d;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) d.e[i][j] = to_double(m.e[i][j]);
  return LorentzIsometry::unchecked(d);
}

/// l = 2 arccosh(|tr g| / 2).
template <class T>
double geodesic_length(const Mat2<T>& g) {
  if (classify_sl2(g) != IsometryClass::Hyperbolic) {
    throw Error(ErrorKind::NotHyperbolic, "SL2 element is not hyperbolic");
  }
  return 2.0 * std::acosh(std::abs(to_double(g.trace())) / 2.0);
}

/// l = log of the top eigenvalue, which satisfies e^l + 1 + e^-l = tr.
inline double geodesic_length(const LorentzIsometry& h) {
  if (classify_so21(h) != IsometryClass::Hyperbolic) {
    throw Error(ErrorKind::NotHyperbolic, "isometry is not hyperbolic");
  }
  return std::acosh((h.trace() - 1.0) / 2.0);
}

/// Eigenframe of a hyperbolic isometry: x- and x+ are null eigenvectors for
/// e^-l and e^l normalized to z = 1, x0 the unit fixed vector.
struct BoostFrame {
  LorentzVector xminus;
  LorentzVector xzero;
  LorentzVector xplus;
  double ell{0};
};

namespace detail {

inline LorentzVector largest_column(const Mat3<double>& m) {
  int best = 0;
  double best_norm = -1.0;
  for (int j = 0; j < 3; ++j) {
    const double n = column(m, j).euclidean_norm();
    if (n > best_norm) {
      best_norm = n;
      best = j;
    }
  }
  return column(m, best);
}

}  // namespace detail

/// The eigenvector for e^l spans the image of (h - I)(h - e^-l I), and
/// symmetrically for e^-l. x0 is read off h - h^-1 = 2 sinh(l) cross_matrix(x0)
/// and oriented so that det[x0 | x- | x+] > 0, the direction of x- x x+.
inline BoostFrame boost_frame(const LorentzIsometry& h) {
  const double ell = geodesic_length(h);
  const double lambda = std::exp(ell);
  const Mat3<double> id = Mat3<double>::identity();
  const Mat3<double>& m = h.matrix();
  const LorentzVector xp = detail::largest_column((m - id) * (m - (1.0 / lambda) * id));
  const LorentzVector xm = detail::largest_column((m - id) * (m - lambda * id));
  if (xp.z == 0.0 || xm.z == 0.0) {
    throw Error(ErrorKind::NotHyperbolic, "degenerate eigenvectors");
  }
  BoostFrame f;
  f.ell = ell;
  f.xplus = xp / xp.z;
  f.xminus = xm / xm.z;
  const Mat3<double> k = m - h.inverse().matrix();
  LorentzVector x0{-(k.e[1][2] + k.e[2][1]), k.e[0][2] + k.e[2][0], k.e[1][0] - k.e[0][1]};
  x0 = x0 / std::sqrt(bilinear_form(x0, x0));
  if (det3(x0, f.xminus, f.xplus) < 0) x0 = -1.0 * x0;
  f.xzero = x0;
  return f;
}

/// Image of diag(e^{l/2}, e^{-l/2}): the boost fixing (0,1,0) with
/// attracting direction (1,0,1).
inline LorentzIsometry standard_boost(double ell) {
  const double c = std::cosh(ell), s = std::sinh(ell);
  Mat3<double> m = Mat3<double>::identity();
  m.e[0][0] = c;
  m.e[0][2] = s;
  m.e[2][0] = s;
  m.e[2][2] = c;
  return LorentzIsometry::unchecked(m);
}

}  // namespace flatlab
