#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace flatlab {

/// 2x2 matrix [[a, b], [c, d]] over an ordered field (double or Rational).
template <class T>
struct Mat2 {
  T a{1}, b{0}, c{0}, d{1};

  static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }
  static Mat2 diagonal(const T& p, const T& q) { return {p, T(0), T(0), q}; }

  T det() const { return a * d - b * c; }
  T trace() const { return a + d; }

  /// Inverse via the adjugate; callers guarantee det != 0.
  Mat2 inverse() const {
    const T dt = det();
    return {d / dt, -b / dt, -c / dt, a / dt};
  }
  Mat2 transpose() const { return {a, c, b, d}; }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
  }
  Mat2 operator-() const { return {-a, -b, -c, -d}; }
  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

template <class T>
double max_abs_diff(const Mat2<T>& x, const Mat2<T>& y) {
  using std::abs;
  return std::max({std::abs(double(x.a - y.a)), std::abs(double(x.b - y.b)),
                   std::abs(double(x.c - y.c)), std::abs(double(x.d - y.d))});
}

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat2<T>& m) {
  return os << "[[" << m.a << ", " << m.b << "], [" << m.c << ", " << m.d << "]]";
}

/// Dense 3x3 matrix, row-major.
template <class T>
struct Mat3 {
  std::array<std::array<T, 3>, 3> e{};

  static Mat3 zero() { return Mat3{}; }
  static Mat3 identity() {
    Mat3 m;
    for (int i = 0; i < 3; ++i) m.e[i][i] = T(1);
    return m;
  }
  static Mat3 diagonal(const T& p, const T& q, const T& r) {
    Mat3 m;
    m.e[0][0] = p;
    m.e[1][1] = q;
    m.e[2][2] = r;
    return m;
  }

  T& operator()(int i, int j) { return e[i][j]; }
  const T& operator()(int i, int j) const { return e[i][j]; }

  T trace() const { return e[0][0] + e[1][1] + e[2][2]; }
  T det() const {
    return e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
           e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
           e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
  }
  Mat3 transpose() const {
    Mat3 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) t.e[i][j] = e[j][i];
    return t;
  }
  Mat3 inverse() const {
    Mat3 inv;
    const T dt = det();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const int r0 = (j + 1) % 3, r1 = (j + 2) % 3;
        const int c0 = (i + 1) % 3, c1 = (i + 2) % 3;
        inv.e[i][j] = (e[r0][c0] * e[r1][c1] - e[r0][c1] * e[r1][c0]) / dt;
      }
    }
    return inv;
  }

  friend Mat3 operator*(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        T s = x.e[i][0] * y.e[0][j];
        s += x.e[i][1] * y.e[1][j];
        s += x.e[i][2] * y.e[2][j];
        r.e[i][j] = s;
      }
    return r;
  }
  friend Mat3 operator+(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.e[i][j] = x.e[i][j] + y.e[i][j];
    return r;
  }
  friend Mat3 operator-(const Mat3& x, const Mat3& y) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.e[i][j] = x.e[i][j] - y.e[i][j];
    return r;
  }
  friend Mat3 operator*(const T& s, const Mat3& x) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.e[i][j] = s * x.e[i][j];
    return r;
  }
  friend bool operator==(const Mat3& x, const Mat3& y) { return x.e == y.e; }
};

inline double max_abs_diff(const Mat3<double>& x, const Mat3<double>& y) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(x.e[i][j] - y.e[i][j]));
  return m;
}

inline double max_abs(const Mat3<double>& x) { return max_abs_diff(x, Mat3<double>::zero()); }

template <class T>
std::ostream& operator<<(std::ostream& os, const Mat3<T>& m) {
  os << "[";
  for (int i = 0; i < 3; ++i) {
    os << (i ? ", [" : "[") << m.e[i][0] << ", " << m.e[i][1] << ", " << m.e[i][2] << "]";
  }
  return os << "]";
}

/// exp(A) by scaling and squaring with a truncated Taylor series.
inline Mat3<double> expm(const Mat3<double>& a) {
  const double norm = max_abs(a) * 3.0;
  int squarings = 0;
  double scale = 1.0;
  while (norm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const Mat3<double> x = scale * a;
  Mat3<double> term = Mat3<double>::identity();
  Mat3<double> sum = term;
  for (int k = 1; k <= 18; ++k) {
    term = (1.0 / k) * (term * x);
    sum = sum + term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace flatlab
