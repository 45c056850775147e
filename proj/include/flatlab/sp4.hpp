#pragma once

#include <array>
#include <string>

#include "flatlab/error.hpp"
#include "flatlab/lorentz.hpp"
#include "flatlab/matrix.hpp"
#include "flatlab/rational.hpp"
#include "flatlab/words.hpp"

namespace flatlab {

/// 4x4 rational matrix on W = L0 + Linf, written in 2x2 blocks [[A, B], [C, D]].
struct Sp4Matrix {
  std::array<std::array<Rational, 4>, 4> m{};

  static Sp4Matrix identity() {
    Sp4Matrix r;
    for (int i = 0; i < 4; ++i) r.m[i][i] = 1;
    return r;
  }

  /// [[0, I], [-I, 0]].
  static Sp4Matrix J() {
    Sp4Matrix r;
    r.m[0][2] = 1;
    r.m[1][3] = 1;
    r.m[2][0] = -1;
    r.m[3][1] = -1;
    return r;
  }

  static Sp4Matrix from_blocks(const Mat2<Rational>& a, const Mat2<Rational>& b, const Mat2<Rational>& c,
                               const Mat2<Rational>& d) {
    Sp4Matrix r;
    auto put = [&](const Mat2<Rational>& x, int i0, int j0) {
      r.m[i0][j0] = x.a;
      r.m[i0][j0 + 1] = x.b;
      r.m[i0 + 1][j0] = x.c;
      r.m[i0 + 1][j0 + 1] = x.d;
    };
    put(a, 0, 0);
    put(b, 0, 2);
    put(c, 2, 0);
    put(d, 2, 2);
    return r;
  }

  Mat2<Rational> block(int bi, int bj) const {
    const int i0 = 2 * bi, j0 = 2 * bj;
    return {m[i0][j0], m[i0][j0 + 1], m[i0 + 1][j0], m[i0 + 1][j0 + 1]};
  }

  Sp4Matrix transpose() const {
    Sp4Matrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r.m[i][j] = m[j][i];
    return r;
  }

  friend Sp4Matrix operator*(const Sp4Matrix& x, const Sp4Matrix& y) {
    Sp4Matrix r;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        Rational s = 0;
        for (int k = 0; k < 4; ++k) s += x.m[i][k] * y.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  friend bool operator==(const Sp4Matrix& x, const Sp4Matrix& y) { return x.m == y.m; }
};

/// Exact test m^T J m = J.
inline bool symplectic_check(const Sp4Matrix& m) { return m.transpose() * Sp4Matrix::J() * m == Sp4Matrix::J(); }

inline bool is_symmetric(const Mat2<Rational>& f) { return f.b == f.c; }

/// [[I, f], [0, I]]: translation by f on the chart.
inline Sp4Matrix make_shear(const Mat2<Rational>& f) {
  if (!is_symmetric(f)) throw Error(ErrorKind::NotSymmetric, "shear block must be symmetric");
  const Mat2<Rational> id = Mat2<Rational>::identity();
  const Mat2<Rational> zero{0, 0, 0, 0};
  return Sp4Matrix::from_blocks(id, f, zero, id);
}

/// g + (g^T)^-1, which preserves both coordinate Lagrangians.
inline Sp4Matrix block_embed(const Mat2<Rational>& g) {
  const Rational d = g.det();
  if (d != 1 && d != -1) throw Error(ErrorKind::BadDeterminant, "block embedding needs det = +-1, got " + to_string(d));
  const Mat2<Rational> zero{0, 0, 0, 0};
  return Sp4Matrix::from_blocks(g, zero, zero, g.transpose().inverse());
}

/// Exact affine map of Minkowski space in rational coordinates.
struct ExactAffine {
  Mat3<Rational> linear = Mat3<Rational>::identity();
  std::array<Rational, 3> trans{};

  friend ExactAffine operator*(const ExactAffine& f, const ExactAffine& g) {
    ExactAffine r;
    r.linear = f.linear * g.linear;
    for (int i = 0; i < 3; ++i) {
      Rational s = f.trans[i];
      for (int k = 0; k < 3; ++k) s += f.linear.e[i][k] * g.trans[k];
      r.trans[i] = s;
    }
    return r;
  }
  friend bool operator==(const ExactAffine&, const ExactAffine&) = default;
};

/// Symmetric S = [[a, b], [b, c]] in (a, b, c) coordinates to (X, Y, Z).
inline std::array<Rational, 3> abc_to_xyz(const std::array<Rational, 3>& s) {
  return {(s[0] - s[2]) / 2, s[1], (s[0] + s[2]) / 2};
}

inline LorentzVector to_lorentz(const std::array<Rational, 3>& v) {
  return {to_double(v[0]), to_double(v[1]), to_double(v[2])};
}

struct Sp4Affine {
  /// S -> A S A^T on (a, b, c).
  Mat3<Rational> linear_abc;
  /// B A^T as (a, b, c).
  std::array<Rational, 3> translation_abc{};
  /// The same map in (X, Y, Z) coordinates.
  ExactAffine exact;
  AffineMap affine;
};

inline Mat3<Rational> sym_action_abc(const Mat2<Rational>& a) {
  Mat3<Rational> m;
  const Mat2<Rational> basis[3] = {{1, 0, 0, 0}, {0, 1, 1, 0}, {0, 0, 0, 1}};
  for (int j = 0; j < 3; ++j) {
    const Mat2<Rational> img = a * basis[j] * a.transpose();
    m.e[0][j] = img.a;
    m.e[1][j] = img.b;
    m.e[2][j] = img.d;
  }
  return m;
}

/// Action of [[A, B], [0, (A^T)^-1]] on Lagrangians transverse to L0,
/// written as graphs S of self-adjoint maps Linf -> L0:
/// S -> A S A^T + B A^T.
inline Sp4Affine sp4_to_affine(const Sp4Matrix& m) {
  const Mat2<Rational> a = m.block(0, 0), b = m.block(0, 1), c = m.block(1, 0), d = m.block(1, 1);
  const Mat2<Rational> zero{0, 0, 0, 0};
  if (!(c == zero)) throw Error(ErrorKind::NotAffineChart, "lower-left block must vanish");
  if (a.det() == 0) throw Error(ErrorKind::NotAffineChart, "upper-left block must be invertible");
  if (!(d == a.transpose().inverse())) throw Error(ErrorKind::NotAffineChart, "lower-right block must be (A^T)^-1");
  const Mat2<Rational> t = b * a.transpose();
  if (!is_symmetric(t)) throw Error(ErrorKind::NonSymmetricTranslation, "B A^T is not symmetric");

  Sp4Affine r;
  r.linear_abc = sym_action_abc(a);
  r.translation_abc = {t.a, t.b, t.d};
  r.exact.linear = adjoint_matrix(a);
  r.exact.trans = abc_to_xyz(r.translation_abc);
  Mat3<double> lin;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) lin.e[i][j] = to_double(r.exact.linear.e[i][j]);
  r.affine = {LorentzIsometry::unchecked(lin), to_lorentz(r.exact.trans)};
  return r;
}

struct Sp4ExampleParams {
  Rational mu1{1}, mu2{1}, mu3{1};
};

struct ArithmeticExample {
  Sp4Matrix g1, g2;
  Mat2<Rational> a1, a2;
  Sp4Affine affine1, affine2;
  AffineDeformation def;
};

/// The two displayed generators over the level two congruence subgroup.
inline ArithmeticExample arithmetic_example(const Sp4ExampleParams& p) {
  Sp4Matrix g1, g2;
  g1.m = {{{-1, -2, p.mu1 + p.mu2 - p.mu3, 0},
           {0, -1, 2 * p.mu1, -p.mu1},
           {0, 0, -1, 0},
           {0, 0, 2, -1}}};
  g2.m = {{{-1, 0, -p.mu2, -2 * p.mu2},
           {2, -1, 0, 0},
           {0, 0, -1, -2},
           {0, 0, 0, -1}}};
  const Mat2<Rational> a1{-1, -2, 0, -1}, a2{-1, 0, 2, -1};
  const Sp4Affine f1 = sp4_to_affine(g1), f2 = sp4_to_affine(g2);
  AffineDeformation def({to_double(a1), to_double(a2)}, {f1.affine.trans, f2.affine.trans});
  return {g1, g2, a1, a2, f1, f2, std::move(def)};
}

}  // namespace flatlab
