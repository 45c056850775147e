#include "catch_amalgamated.hpp"

#include "flatlab/margulis.hpp"
#include "flatlab/random.hpp"
#include "flatlab/sp4.hpp"

using namespace flatlab;

namespace {

Mat2<Rational> random_integer_sl2(Rng& rng) {
  for (;;) {
    const int a = rng.integer(-4, 4), b = rng.integer(-4, 4), c = rng.integer(-4, 4);
    if (a == 0 || (1 + b * c) % a != 0) continue;
    return {a, b, c, (1 + b * c) / a};
  }
}

Mat2<Rational> random_symmetric(Rng& rng) {
  const Rational b(rng.integer(-5, 5), rng.integer(1, 4));
  return {Rational(rng.integer(-5, 5), rng.integer(1, 4)), b, b, Rational(rng.integer(-5, 5), rng.integer(1, 4))};
}

/// Image of the graph Lagrangian of S: span of [S; I] maps to [A S + B; D], the graph of (A S + B) D^-1.
Mat2<Rational> graph_image(const Sp4Matrix& m, const Mat2<Rational>& s) {
  return (m.block(0, 0) * s + m.block(0, 1)) * m.block(1, 1).inverse();
}

std::array<Rational, 3> apply_affine(const ExactAffine& f, const std::array<Rational, 3>& x) {
  std::array<Rational, 3> r = f.trans;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r[i] += f.linear.e[i][k] * x[k];
  return r;
}

std::array<Rational, 3> xyz_of(const Mat2<Rational>& s) { return abc_to_xyz({s.a, s.b, s.d}); }

Sp4Matrix chart_element(const Mat2<Rational>& a, const Mat2<Rational>& f) {
  return make_shear(f) * block_embed(a);
}

}  // namespace

TEST_CASE("symplectic checks are exact") {
  CHECK(symplectic_check(Sp4Matrix::identity()));
  CHECK(symplectic_check(Sp4Matrix::J()));
  Sp4Matrix m = Sp4Matrix::identity();
  m.m[0][0] = 2;
  CHECK_FALSE(symplectic_check(m));
  Rng rng(61);
  for (int i = 0; i < 50; ++i) {
    CHECK(symplectic_check(block_embed(random_integer_sl2(rng))));
    CHECK(symplectic_check(make_shear(random_symmetric(rng))));
  }
  CHECK(symplectic_check(block_embed({1, 0, 0, -1})));
}

TEST_CASE("shear and embedding preconditions") {
  try {
    make_shear({1, 2, 3, 4});
    FAIL("expected NotSymmetric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
  try {
    block_embed({2, 0, 0, 1});
    FAIL("expected BadDeterminant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BadDeterminant);
  }
}

TEST_CASE("chart map agrees with the action on graph Lagrangians") {
  Rng rng(62);
  for (int i = 0; i < 100; ++i) {
    const Sp4Matrix m = chart_element(random_integer_sl2(rng), random_symmetric(rng));
    REQUIRE(symplectic_check(m));
    const Sp4Affine f = sp4_to_affine(m);
    const Mat2<Rational> s = random_symmetric(rng);
    CHECK(apply_affine(f.exact, xyz_of(s)) == xyz_of(graph_image(m, s)));
  }
}

TEST_CASE("chart map is a homomorphism") {
  Rng rng(63);
  for (int i = 0; i < 50; ++i) {
    const Sp4Matrix m1 = chart_element(random_integer_sl2(rng), random_symmetric(rng));
    const Sp4Matrix m2 = chart_element(random_integer_sl2(rng), random_symmetric(rng));
    CHECK(sp4_to_affine(m1 * m2).exact == sp4_to_affine(m1).exact * sp4_to_affine(m2).exact);
  }
}

TEST_CASE("embedded and shear elements") {
  const Mat2<Rational> g{2, 1, 1, 1};
  const Sp4Affine e = sp4_to_affine(block_embed(g));
  CHECK(e.exact.linear == adjoint_matrix(g));
  CHECK(e.exact.trans == std::array<Rational, 3>{0, 0, 0});
  const Mat2<Rational> f{3, Rational(1, 2), Rational(1, 2), 1};
  const Sp4Affine t = sp4_to_affine(make_shear(f));
  CHECK(t.exact.linear == Mat3<Rational>::identity());
  CHECK(t.exact.trans == std::array<Rational, 3>{1, Rational(1, 2), 2});
}

TEST_CASE("chart preconditions") {
  try {
    sp4_to_affine(Sp4Matrix::J());
    FAIL("expected NotAffineChart");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAffineChart);
  }
  const Mat2<Rational> zero{0, 0, 0, 0};
  const Mat2<Rational> id = Mat2<Rational>::identity();
  try {
    sp4_to_affine(Sp4Matrix::from_blocks(id, {0, 1, 0, 0}, zero, id));
    FAIL("expected NonSymmetricTranslation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonSymmetricTranslation);
  }
  try {
    sp4_to_affine(Sp4Matrix::from_blocks(id, zero, zero, {2, 0, 0, 1}));
    FAIL("expected NotAffineChart");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotAffineChart);
  }
}

TEST_CASE("arithmetic example generators") {
  const ArithmeticExample ex = arithmetic_example({2, 3, 5});
  const Rational g1[4][4] = {{-1, -2, 0, 0}, {0, -1, 4, -2}, {0, 0, -1, 0}, {0, 0, 2, -1}};
  const Rational g2[4][4] = {{-1, 0, -3, -6}, {2, -1, 0, 0}, {0, 0, -1, -2}, {0, 0, 0, -1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(ex.g1.m[i][j] == g1[i][j]);
      CHECK(ex.g2.m[i][j] == g2[i][j]);
    }
  CHECK(symplectic_check(ex.g1));
  CHECK(symplectic_check(ex.g2));
  CHECK(ex.g1.block(0, 0) == ex.a1);
  CHECK(ex.g2.block(0, 0) == ex.a2);
  CHECK(classify_sl2(ex.a1) == IsometryClass::Parabolic);
  CHECK(classify_sl2(ex.a2) == IsometryClass::Parabolic);
  CHECK(classify_sl2(ex.a1 * ex.a2) == IsometryClass::Parabolic);
  CHECK(classify_sl2(ex.a1 * ex.a2.inverse()) == IsometryClass::Hyperbolic);
}

TEST_CASE("arithmetic example with symbolic parameters") {
  Rng rng(64);
  for (int i = 0; i < 30; ++i) {
    const Rational m1(rng.integer(-9, 9), rng.integer(1, 5)), m2(rng.integer(-9, 9), rng.integer(1, 5)),
        m3(rng.integer(-9, 9), rng.integer(1, 5));
    const ArithmeticExample ex = arithmetic_example({m1, m2, m3});
    CHECK(symplectic_check(ex.g1));
    CHECK(symplectic_check(ex.g2));
    CHECK(ex.g1.m[0][2] == m1 + m2 - m3);
    CHECK(ex.g1.m[1][2] == 2 * m1);
    CHECK(ex.g1.m[1][3] == -m1);
    CHECK(ex.g2.m[0][2] == -m2);
    CHECK(ex.g2.m[0][3] == -2 * m2);
    // The translations are linear in the parameters.
    const ArithmeticExample doubled = arithmetic_example({2 * m1, 2 * m2, 2 * m3});
    for (int k = 0; k < 3; ++k) {
      CHECK(doubled.affine1.exact.trans[k] == 2 * ex.affine1.exact.trans[k]);
      CHECK(doubled.affine2.exact.trans[k] == 2 * ex.affine2.exact.trans[k]);
    }
  }
}

TEST_CASE("arithmetic example sign spectrum with the displayed matrices") {
  const SignSpectrum s = sign_spectrum(arithmetic_example({1, 1, 1}).def, 6);
  CHECK(s.positive == 96);
  CHECK(s.negative == 6);
  CHECK(s.zero == 0);
  CHECK(s.skipped_nonhyperbolic == 15);
  CHECK(s.verdict == Verdict::Mixed);
}

TEST_CASE("flipping the sign of the third parameter gives a uniform spectrum") {
  for (int m1 = 1; m1 <= 2; ++m1)
    for (int m2 = 1; m2 <= 2; ++m2)
      for (int m3 = 1; m3 <= 2; ++m3) {
        const SignSpectrum s = sign_spectrum(arithmetic_example({m1, m2, -m3}).def, 6);
        CHECK(s.verdict == Verdict::UniformPositive);
        CHECK(s.zero == 0);
        CHECK(s.skipped_nonhyperbolic > 0);
      }
}
