// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "flatlab/crooked.hpp"
#include "flatlab/euler.hpp"
#include "flatlab/fixtures.hpp"
#include "flatlab/margulis.hpp"
#include "flatlab/random.hpp"
#include "flatlab/sp4.hpp"
#include "flatlab/words.hpp"

using namespace flatlab;

namespace {

constexpr double kLiftTol = 1e-6;
constexpr double kOctagonSeconds = 1.0;
constexpr long kMilnorPairs = 10000;
constexpr double kMilnorSeconds = 30.0;
constexpr long kWoodTuples = 1000;
constexpr long kBoostSamples = 1000;
constexpr double kFrameRange = 1.5;
constexpr double kHomogeneityRelTol = 1e-9;
constexpr double kNormalFormTol = 1e-8;
constexpr double kAlphaTol = 1e-9;
constexpr long kDerivativePairs = 100;
constexpr double kStepCoarse = 1e-3;
constexpr double kRatioLo = 8.0;
constexpr double kRatioHi = 12.0;
constexpr int kArithmeticMaxLen = 6;
constexpr int kSearchBound = 5;
constexpr double kArithmeticSeconds = 60.0;
constexpr int kOppositeSignMaxLen = 3;
constexpr long kCrookedPoints = 10000;
constexpr int kCrookedPlanes = 20;
constexpr double kBisectTol = 1e-8;
constexpr long kSlabPoints = 1000;
constexpr int kSlabMaxSteps = 64;
constexpr long kTurningTrials = 1000;
constexpr double kMaxCondition = 100.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass{false};
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

/// Random element of SO(2,1)_0 together with a random translation.
AffineMap random_frame(Rng& rng) {
  return {sl2_to_so21(random_sl2(rng, kFrameRange)), random_vector(rng, 3.0)};
}

AffineMap random_boost(Rng& rng, double& ell, double& alpha, bool positive) {
  ell = rng.uniform(0.5, 3.0);
  alpha = rng.uniform(0.5, 2.0);
  if (!positive && rng.uniform() < 0.5) alpha = -alpha;
  const AffineMap h = random_frame(rng);
  return h * affine_boost(ell, alpha) * h.inverse();
}

AffineMap power(const AffineMap& g, int n) {
  AffineMap r = AffineMap::identity();
  const AffineMap base = n < 0 ? g.inverse() : g;
  for (int i = 0; i < std::abs(n); ++i) r = r * base;
  return r;
}

Outcome criterion1() {
  const auto t0 = Clock::now();
  const Representation rep(RepKind::Projective2, fixtures::octagon_generators());
  const EulerReport r = euler_number(rep, 2, EulerMode::Projective);
  const double secs = seconds_since(t0);
  const double turns = r.raw_lift / kPi;
  const double off = std::abs(turns - std::round(turns));
  const bool pass = std::labs(r.e) == 2 && r.bound == 2 && off <= kLiftTol && secs < kOctagonSeconds;
  return {pass, "e=" + std::to_string(r.e) + " 2g-2=" + std::to_string(r.bound) + fmt(" lift-off=%.2e", off) +
                    fmt(" t=%.3fs", secs)};
}

Outcome criterion2() {
  const auto gens = fixtures::octagon_generators();
  const EulerReport lin = euler_number(Representation(RepKind::Linear2, gens), 2, EulerMode::Linear);
  const EulerReport proj = euler_number(Representation(RepKind::Projective2, gens), 2, EulerMode::Projective);
  const bool pass = std::labs(lin.e) == 1 && lin.bound == 1 && std::labs(lin.e) < 2 && proj.e == 2 * lin.e;
  return {pass, "e_linear=" + std::to_string(lin.e) + " e_projective=" + std::to_string(proj.e) + " g=2"};
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  Rng rng(0);
  double worst = 0.0;
  for (long i = 0; i < kMilnorPairs; ++i) {
    const Mat2<double> g1 = random_sl2(rng), g2 = random_sl2(rng);
    worst = std::max(worst, milnor_estimate_defect(g1, g2));
  }
  const double secs = seconds_since(t0);
  return {worst < kPi / 2 && secs < kMilnorSeconds, fmt("max defect=%.6f", worst) + fmt(" pi/2=%.6f", kPi / 2) +
                                                        " pairs=" + std::to_string(kMilnorPairs) + fmt(" t=%.2fs", secs)};
}

Outcome criterion4() {
  Rng rng(1);
  long violations = 0;
  std::string detail;
  for (int m = 1; m <= 3; ++m) {
    double worst = 0.0;
    for (long i = 0; i < kWoodTuples; ++i) {
      std::vector<Mat2<double>> gens;
      for (int k = 0; k < 2 * m; ++k) gens.push_back(random_sl2(rng));
      const WoodCheck c = wood_bound_check(Representation(RepKind::Linear2, gens), m);
      worst = std::max(worst, std::abs(c.a));
      if (!(std::abs(c.a) < 2.0 * m - 1.0)) ++violations;
    }
    detail += "m=" + std::to_string(m) + fmt(" max|a|=%.4f", worst) + fmt("<%g ", 2.0 * m - 1.0);
  }
  return {violations == 0, detail + "violations=" + std::to_string(violations)};
}

Outcome criterion5() {
  Rng rng(2);
  double worst = 0.0;
  for (long i = 0; i < kBoostSamples; ++i) {
    double ell = 0, alpha = 0;
    const AffineMap g = random_boost(rng, ell, alpha, false);
    const double a1 = margulis_alpha(g);
    for (int n = -3; n <= 3; ++n) {
      if (n == 0) continue;
      const double an = margulis_alpha(power(g, n));
      worst = std::max(worst, std::abs(an - std::abs(n) * a1) / (std::abs(n) * std::abs(a1)));
    }
  }
  return {worst <= kHomogeneityRelTol, fmt("max relative error=%.3e", worst) + " samples=" + std::to_string(kBoostSamples)};
}

Outcome criterion6() {
  Rng rng(3);
  double worst_lin = 0.0, worst_trans = 0.0, worst_alpha = 0.0;
  for (long i = 0; i < kBoostSamples; ++i) {
    double ell = 0, alpha = 0;
    const AffineMap g = random_boost(rng, ell, alpha, false);
    const BoostNormalForm nf = boost_normal_form(g);
    const Mat3<double> expected = Mat3<double>::diagonal(std::exp(ell), 1.0, std::exp(-ell));
    worst_lin = std::max(worst_lin, max_abs_diff(in_null_frame(nf.conjugated.linear.matrix()), expected));
    worst_trans = std::max(worst_trans, max_abs_diff(nf.conjugated.trans, LorentzVector{0.0, alpha, 0.0}));
    const LorentzVector x0 = boost_frame(g.linear).xzero;
    worst_alpha = std::max(worst_alpha, std::abs(nf.alpha - bilinear_form(g.trans, x0)));
    worst_alpha = std::max(worst_alpha, std::abs(nf.alpha - alpha));
  }
  const bool pass = worst_lin <= kNormalFormTol && worst_trans <= kNormalFormTol && worst_alpha <= kAlphaTol;
  return {pass, fmt("linear=%.2e", worst_lin) + fmt(" translation=%.2e", worst_trans) + fmt(" alpha=%.2e", worst_alpha)};
}

Outcome criterion7() {
  Rng rng(4);
  long done = 0, bad = 0;
  double c_max = 0.0, ratio_lo = 1e300, ratio_hi = 0.0;
  while (done < kDerivativePairs) {
    const Representation rho0(std::vector<LorentzIsometry>{sl2_to_so21(random_sl2(rng, 2.0)),
                                                           sl2_to_so21(random_sl2(rng, 2.0))});
    std::vector<Letter> raw;
    const int len = rng.integer(1, 4);
    for (int k = 0; k < len; ++k) raw.push_back({rng.integer(1, 2), rng.uniform() < 0.5 ? 1 : -1});
    const Word w = cyclic_reduce(reduce(raw));
    if (w.empty() || classify_so21(evaluate_lorentz(rho0, w)) != IsometryClass::Hyperbolic) continue;
    const std::vector<LorentzVector> u{random_vector(rng, 1.0), random_vector(rng, 1.0)};
    const LengthDerivative coarse = length_derivative_check(rho0, u, w, kStepCoarse);
    const LengthDerivative fine = length_derivative_check(rho0, u, w, kStepCoarse / 10);
    const double ratio = coarse.err / fine.err;
    c_max = std::max(c_max, coarse.c_estimate);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
    if (!(ratio >= kRatioLo && ratio <= kRatioHi)) ++bad;
    ++done;
  }
  return {bad == 0, fmt("C=%.3g", c_max) + fmt(" ratio in [%.3f,", ratio_lo) + fmt(" %.3f]", ratio_hi) +
                        " out-of-band=" + std::to_string(bad) + "/" + std::to_string(done)};
}

/// Literal transcription of the two displayed generators.
std::array<Sp4Matrix, 2> displayed_generators(const Rational& m1, const Rational& m2, const Rational& m3) {
  Sp4Matrix g1, g2;
  const Rational rows1[4][4] = {{-1, -2, m1 + m2 - m3, 0}, {0, -1, 2 * m1, -m1}, {0, 0, -1, 0}, {0, 0, 2, -1}};
  const Rational rows2[4][4] = {{-1, 0, -m2, -2 * m2}, {2, -1, 0, 0}, {0, 0, -1, -2}, {0, 0, 0, -1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      g1.m[i][j] = rows1[i][j];
      g2.m[i][j] = rows2[i][j];
    }
  return {g1, g2};
}

Outcome criterion8() {
  const auto t0 = Clock::now();
  bool entries = true, symplectic = true;
  const Rational samples[] = {Rational(1), Rational(2), Rational(-3), Rational(5, 7), Rational(-11, 4)};
  for (const Rational& a : samples)
    for (const Rational& b : samples)
      for (const Rational& c : samples) {
        const ArithmeticExample ex = arithmetic_example({a, b, c});
        const auto lit = displayed_generators(a, b, c);
        entries = entries && ex.g1 == lit[0] && ex.g2 == lit[1];
        symplectic = symplectic && symplectic_check(ex.g1) && symplectic_check(ex.g2);
      }

  std::string detail;
  bool uniform = true;
  for (int m1 = 1; m1 <= 2; ++m1)
    for (int m2 = 1; m2 <= 2; ++m2)
      for (int m3 = 1; m3 <= 2; ++m3) {
        const SignSpectrum s = sign_spectrum(arithmetic_example({m1, m2, m3}).def, kArithmeticMaxLen);
        const bool ok = (s.verdict == Verdict::UniformPositive || s.verdict == Verdict::UniformNegative) &&
                        s.zero == 0 && s.skipped_nonhyperbolic > 0;
        uniform = uniform && ok;
        if (m1 == 1 && m2 == 1 && m3 == 1) {
          detail += "mu=(1,1,1): " + std::string(to_string(s.verdict)) + " +" + std::to_string(s.positive) + " -" +
                    std::to_string(s.negative) + " 0:" + std::to_string(s.zero) +
                    " skipped=" + std::to_string(s.skipped_nonhyperbolic) + "; ";
        }
        if (!ok) detail += "(" + std::to_string(m1) + std::to_string(m2) + std::to_string(m3) + ")";
      }
  if (!uniform) detail += " non-uniform; ";

  bool found_mixed = false;
  std::string mixed_at;
  for (int m1 = -kSearchBound; m1 <= kSearchBound && !found_mixed; ++m1)
    for (int m2 = -kSearchBound; m2 <= kSearchBound && !found_mixed; ++m2)
      for (int m3 = -kSearchBound; m3 <= kSearchBound && !found_mixed; ++m3) {
        const bool mixed_signs = (m1 < 0 || m2 < 0 || m3 < 0) && (m1 > 0 || m2 > 0 || m3 > 0);
        if (!mixed_signs) continue;
        if (sign_spectrum(arithmetic_example({m1, m2, m3}).def, kArithmeticMaxLen).verdict == Verdict::Mixed) {
          found_mixed = true;
          mixed_at = "(" + std::to_string(m1) + "," + std::to_string(m2) + "," + std::to_string(m3) + ")";
        }
      }
  const double secs = seconds_since(t0);
  detail += std::string("entries=") + (entries ? "ok" : "mismatch") + " symplectic=" + (symplectic ? "ok" : "no") +
            " mixed-search=" + (found_mixed ? mixed_at : "none") + fmt(" t=%.2fs", secs);
  return {entries && symplectic && uniform && found_mixed && secs < kArithmeticSeconds, detail};
}

Outcome criterion9() {
  const AffineMap h{sl2_to_so21(Mat2<double>{2.0, 1.0, 1.0, 1.0}), {0.5, -1.0, 0.25}};
  const AffineMap g1 = affine_boost(1.5, 1.0);
  const AffineMap g2 = h * affine_boost(2.0, -0.75) * h.inverse();
  const AffineDeformation def({sl2_boost(1.5), Mat2<double>{2.0, 1.0, 1.0, 1.0} * sl2_boost(2.0) *
                                                   Mat2<double>{2.0, 1.0, 1.0, 1.0}.inverse()},
                              {g1.trans, g2.trans});
  const double a1 = boost_normal_form(def.generators()[0]).alpha;
  const double a2 = boost_normal_form(def.generators()[1]).alpha;
  const SignSpectrum s = sign_spectrum(def, kOppositeSignMaxLen);
  const bool pass = a1 * a2 < 0 && s.verdict == Verdict::Mixed;
  return {pass, fmt("alpha1=%.4f", a1) + fmt(" alpha2=%.4f", a2) + " verdict=" + std::string(to_string(s.verdict)) +
                    " max_len=" + std::to_string(kOppositeSignMaxLen)};
}

/// Both open sides occur within distance r of x, probing along the Euclidean
/// normals of the stem and wing planes.
bool straddles(const CrookedPlane& c, const LorentzVector& x, double r) {
  bool plus = false, minus = false;
  for (const LorentzVector& n : {c.v, c.nplus, c.nminus}) {
    const LorentzVector e = lorentz_gram() * n;
    const LorentzVector d = (r / e.euclidean_norm()) * e;
    for (const LorentzVector& probe : {x + d, x - d}) {
      const Side s = classify_point(c, probe, 0.0);
      plus = plus || s == Side::Plus;
      minus = minus || s == Side::Minus;
    }
  }
  return plus && minus;
}

Outcome criterion10() {
  Rng rng(5);
  long empty_class = 0, on_surface = 0, segments = 0, bisect_fail = 0, scale_fail = 0;
  for (int k = 0; k < kCrookedPlanes; ++k) {
    LorentzVector v;
    do {
      v = random_vector(rng, 1.0);
    } while (bilinear_form(v, v) < 0.05 * v.euclidean_norm() * v.euclidean_norm());
    const CrookedPlane c = make_crooked_plane(random_vector(rng, 2.0), v);
    long plus = 0, minus = 0;
    LorentzVector prev;
    Side prev_side = Side::OnSurface;
    for (long i = 0; i < kCrookedPoints; ++i) {
      const LorentzVector q = c.p + random_vector(rng, 5.0);
      const Side s = classify_point(c, q);
      if (s == Side::OnSurface) {
        ++on_surface;
        continue;
      }
      (s == Side::Plus ? plus : minus)++;
      for (double t : {0.01, 0.3, 2.0, 50.0}) {
        if (classify_point(c, c.p + t * (q - c.p)) != s) ++scale_fail;
      }
      if (prev_side == opposite(s)) {
        ++segments;
        const auto x = bisect_crossing(c, prev, q, kBisectTol);
        bool ok = false;
        if (x) ok = straddles(c, *x, kBisectTol);
        if (!ok) ++bisect_fail;
      }
      prev = q;
      prev_side = s;
    }
    if (plus == 0 || minus == 0) ++empty_class;
  }
  const bool pass = empty_class == 0 && on_surface == 0 && bisect_fail == 0 && scale_fail == 0 && segments > 0;
  return {pass, "planes=" + std::to_string(kCrookedPlanes) + " empty-class=" + std::to_string(empty_class) +
                    " on-surface=" + std::to_string(on_surface) + " segments=" + std::to_string(segments) +
                    " bisect-fail=" + std::to_string(bisect_fail) + " scale-fail=" + std::to_string(scale_fail)};
}

Outcome criterion11() {
  Rng rng(6);
  const Mat2<double> k = random_sl2(rng, 2.0);
  const double ell = 1.6, alpha = 1.0;
  const LorentzVector t = random_vector(rng, 2.0);
  const Mat2<double> lin = k * sl2_boost(ell) * k.inverse();
  const AffineMap h{sl2_to_so21(k), t};
  const AffineMap g = h * affine_boost(ell, alpha) * h.inverse();
  const AffineDeformation def({lin}, {g.trans});
  const std::vector<SlabPair> slabs{drumm_slab(def.generators()[0])};
  long fails = 0;
  int max_steps = 0;
  for (long i = 0; i < kSlabPoints; ++i) {
    const LorentzVector q = random_vector(rng, 10.0);
    const OrbitRecovery r = slab_recover(def, slabs, q, kSlabMaxSteps);
    const bool consistent = r.recovered && max_abs_diff(evaluate_affine(def, r.word)(q), r.point) < 1e-6 &&
                            !contains(slabs[0].plus, r.point) && !contains(slabs[0].minus, r.point);
    if (!consistent) ++fails;
    max_steps = std::max(max_steps, r.steps);
  }
  return {fails == 0, "points=" + std::to_string(kSlabPoints) + " failures=" + std::to_string(fails) +
                          " max steps=" + std::to_string(max_steps) + "/" + std::to_string(kSlabMaxSteps)};
}

std::vector<Point2> regular_polygon(int n) {
  std::vector<Point2> p;
  for (int i = 0; i < n; ++i) p.push_back({std::cos(kTwoPi * i / n), std::sin(kTwoPi * i / n)});
  return p;
}

Outcome criterion12() {
  bool polygons = true;
  for (int n = 3; n <= 12; ++n) {
    const double t = turning_number(regular_polygon(n));
    polygons = polygons && std::abs(t - 1.0) < 1e-12;
  }
  Rng rng(7);
  long violations = 0;
  double worst = 0.0;
  for (long i = 0; i < kTurningTrials; ++i) {
    std::vector<double> angles;
    for (int k = 0; k < 64; ++k) angles.push_back(rng.uniform(0.0, kTwoPi));
    std::sort(angles.begin(), angles.end());
    std::vector<Point2> poly;
    for (double a : angles) {
      const double r = rng.uniform(0.5, 1.5);
      poly.push_back({r * std::cos(a), r * std::sin(a)});
    }
    const double cond = std::exp(rng.uniform(0.0, std::log(kMaxCondition)));
    const double t1 = rng.uniform(0.0, kTwoPi), t2 = rng.uniform(0.0, kTwoPi), scale = rng.uniform(0.1, 10.0);
    const Mat2<double> r1{std::cos(t1), -std::sin(t1), std::sin(t1), std::cos(t1)};
    const Mat2<double> r2{std::cos(t2), -std::sin(t2), std::sin(t2), std::cos(t2)};
    const Mat2<double> d = Mat2<double>::diagonal(scale * std::sqrt(cond), scale / std::sqrt(cond));
    const PlaneAffineMap gamma{r1 * d * r2, {rng.uniform(-5, 5), rng.uniform(-5, 5)}};
    double defect = 0.0;
    try {
      defect = benzecri_defect(poly, gamma);
    } catch (const Error&) {
      --i;
      continue;
    }
    worst = std::max(worst, defect);
    if (!(defect < kPi)) ++violations;
  }
  return {polygons && violations == 0, std::string("n-gons 3..12 ") + (polygons ? "all 1" : "mismatch") +
                                           fmt(" max defect=%.4f", worst) + " violations=" +
                                           std::to_string(violations) + "/" + std::to_string(kTurningTrials)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Milnor-Wood sharpness on the octagon fixture", criterion1},
      {"Milnor linear bound and e_projective = 2 e_linear", criterion2},
      {"Milnor estimate over random SL2 pairs", criterion3},
      {"Wood bound on random tuples", criterion4},
      {"Margulis homogeneity and inversion symmetry", criterion5},
      {"affine boost normal form", criterion6},
      {"alpha as derivative of length", criterion7},
      {"arithmetic example in Sp(4,Z)", criterion8},
      {"opposite sign contrapositive", criterion9},
      {"crooked separation and cone property", criterion10},
      {"crooked slab recovery for a single boost", criterion11},
      {"turning numbers and affine turning defect", criterion12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const Error& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
