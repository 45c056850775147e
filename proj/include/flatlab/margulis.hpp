#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <vector>

#include "flatlab/error.hpp"
#include "flatlab/lorentz.hpp"
#include "flatlab/words.hpp"

namespace flatlab {

struct InvariantRecord {
  Word word;
  IsometryClass klass{IsometryClass::Identity};
  double ell{std::numeric_limits<double>::quiet_NaN()};
  double alpha{std::numeric_limits<double>::quiet_NaN()};
  double normalized{std::numeric_limits<double>::quiet_NaN()};

  bool hyperbolic() const { return klass == IsometryClass::Hyperbolic; }
};

/// alpha = B(u, x0(L)) for an affine map with hyperbolic linear part.
inline double margulis_alpha(const AffineMap& g) {
  return bilinear_form(g.trans, boost_frame(g.linear).xzero);
}

/// Classification and length come from the exact-as-possible SL2 word, the
/// invariant from the composed affine map.
inline InvariantRecord margulis_invariant(const AffineDeformation& def, const Word& w) {
  InvariantRecord r;
  r.word = w;
  const Mat2<double> g = evaluate(def.linear_generators(), w, Mat2<double>::identity());
  r.klass = classify_sl2(g);
  if (!r.hyperbolic()) return r;
  const AffineMap a = evaluate_affine(def, w);
  r.ell = geodesic_length(g);
  r.alpha = margulis_alpha(a);
  r.normalized = r.alpha / r.ell;
  return r;
}

/// The normal form of an affine boost: standard_boost(ell) with translation
/// (0, alpha, 0).
inline AffineMap affine_boost(double ell, double alpha) { return {standard_boost(ell), {0.0, alpha, 0.0}}; }

/// SL2 matrix whose image is standard_boost(ell).
inline Mat2<double> sl2_boost(double ell) { return Mat2<double>::diagonal(std::exp(ell / 2), std::exp(-ell / 2)); }

/// Columns (1,0,1), (0,1,0), (-1,0,1): the null frame (x+, x0, x-) of the
/// standard boost.
inline const Mat3<double>& standard_null_frame() {
  static const Mat3<double> n = from_columns({1, 0, 1}, {0, 1, 0}, {-1, 0, 1});
  return n;
}

/// Matrix of m in the basis (x+, x0, x-) of the standard boost.
inline Mat3<double> in_null_frame(const Mat3<double>& m) {
  const Mat3<double>& n = standard_null_frame();
  return n.inverse() * m * n;
}

struct BoostNormalForm {
  AffineMap frame_change;
  AffineMap conjugated;
  double ell{0};
  double alpha{0};
};

/// h = (K, p0) with K sending the standard null frame to (c x+, x0, c x-),
/// c = sqrt(-2 / B(x+, x-)), and p0 on the invariant line of g. Then
/// h^-1 g h = affine_boost(ell, alpha).
inline BoostNormalForm boost_normal_form(const AffineMap& g) {
  const BoostFrame f = boost_frame(g.linear);
  const double c = std::sqrt(-2.0 / bilinear_form(f.xplus, f.xminus));
  const Mat3<double> k = from_columns(c * f.xplus, f.xzero, c * f.xminus) * standard_null_frame().inverse();

  const double alpha = bilinear_form(g.trans, f.xzero);
  const LorentzVector t_perp = g.trans - alpha * f.xzero;
  const double bpm = bilinear_form(f.xplus, f.xminus);
  const double a = bilinear_form(t_perp, f.xminus) / bpm;
  const double b = bilinear_form(t_perp, f.xplus) / bpm;
  const double lambda = std::exp(f.ell);
  const LorentzVector p0 = (-a / (lambda - 1.0)) * f.xplus + (-b / (1.0 / lambda - 1.0)) * f.xminus;

  BoostNormalForm nf;
  nf.frame_change = {LorentzIsometry::unchecked(k), p0};
  nf.conjugated = nf.frame_change.inverse() * g * nf.frame_change;
  nf.ell = f.ell;
  nf.alpha = alpha;
  return nf;
}

enum class Verdict { UniformPositive, UniformNegative, Mixed, AllZero, Empty };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::UniformPositive: return "UniformPositive";
    case Verdict::UniformNegative: return "UniformNegative";
    case Verdict::Mixed: return "Mixed";
    case Verdict::AllZero: return "AllZero";
    case Verdict::Empty: return "Empty";
  }
  return "Unknown";
}

struct SignSpectrum {
  int max_len{0};
  long positive{0};
  long negative{0};
  long zero{0};
  long skipped_nonhyperbolic{0};
  double min_normalized{std::numeric_limits<double>::quiet_NaN()};
  double max_normalized{std::numeric_limits<double>::quiet_NaN()};
  Verdict verdict{Verdict::Empty};

  long examined() const { return positive + negative + zero + skipped_nonhyperbolic; }
};

/// Mixed when both signs occur. A uniform verdict may still carry zero
/// classes; those are counted, never dropped.
inline Verdict verdict_of(long positive, long negative, long zero) {
  if (positive > 0 && negative > 0) return Verdict::Mixed;
  if (positive > 0) return Verdict::UniformPositive;
  if (negative > 0) return Verdict::UniformNegative;
  if (zero > 0) return Verdict::AllZero;
  return Verdict::Empty;
}

inline SignSpectrum sign_spectrum(const std::vector<InvariantRecord>& records, int max_len) {
  SignSpectrum s;
  s.max_len = max_len;
  for (const InvariantRecord& r : records) {
    if (!r.hyperbolic()) {
      ++s.skipped_nonhyperbolic;
      continue;
    }
    if (std::isnan(s.min_normalized) || r.normalized < s.min_normalized) s.min_normalized = r.normalized;
    if (std::isnan(s.max_normalized) || r.normalized > s.max_normalized) s.max_normalized = r.normalized;
    if (std::abs(r.normalized) <= tol::sign) {
      ++s.zero;
    } else if (r.normalized > 0) {
      ++s.positive;
    } else {
      ++s.negative;
    }
  }
  s.verdict = verdict_of(s.positive, s.negative, s.zero);
  return s;
}

inline std::vector<InvariantRecord> class_invariants(const AffineDeformation& def, int max_len) {
  std::vector<InvariantRecord> out;
  for (const Word& w : class_representatives(def.rank(), max_len)) out.push_back(margulis_invariant(def, w));
  return out;
}

/// One record per class of cyclic words up to inversion, length <= max_len.
inline SignSpectrum sign_spectrum(const AffineDeformation& def, int max_len) {
  if (max_len < 1) throw Error(ErrorKind::InvalidInput, "max_len must be at least 1");
  return sign_spectrum(class_invariants(def, max_len), max_len);
}

struct LengthDerivative {
  double fd{0};
  double alpha{0};
  double err{0};
  /// err(h) / h, with the same quantities at h / 2 for the halving estimate.
  double c_estimate{0};
  double err_half{0};
};

/// rho_t(a_i) = exp(t cross_matrix(u_i)) rho0(a_i).
inline std::vector<LorentzIsometry> deformed_generators(const std::vector<LorentzIsometry>& rho0,
                                                        const std::vector<LorentzVector>& u, double t) {
  std::vector<LorentzIsometry> out;
  for (std::size_t i = 0; i < rho0.size(); ++i) {
    out.push_back(LorentzIsometry::unchecked(expm(t * cross_matrix(u[i])) * rho0[i].matrix()));
  }
  return out;
}

/// Forward difference of the length of w along rho_t against alpha_u(w).
inline LengthDerivative length_derivative_check(const Representation& rho0, const std::vector<LorentzVector>& u,
                                                const Word& w, double h) {
  if (!(h > 0)) throw Error(ErrorKind::InvalidInput, "step must be positive");
  if (static_cast<int>(u.size()) != rho0.rank()) {
    throw Error(ErrorKind::WrongGeneratorCount, "need one cocycle vector per generator");
  }
  const std::vector<LorentzIsometry> gens = rho0.lorentz_generators();
  std::vector<AffineMap> affine;
  for (std::size_t i = 0; i < gens.size(); ++i) affine.push_back({gens[i], u[i]});
  const AffineMap g = evaluate(affine, w, AffineMap::identity());
  const double ell0 = geodesic_length(g.linear);

  auto length_at = [&](double t) {
    return geodesic_length(evaluate(deformed_generators(gens, u, t), w, LorentzIsometry{}));
  };
  LengthDerivative r;
  r.alpha = margulis_alpha(g);
  r.fd = (length_at(h) - ell0) / h;
  r.err = std::abs(r.fd - r.alpha);
  r.c_estimate = r.err / h;
  r.err_half = std::abs((length_at(h / 2) - ell0) / (h / 2) - r.alpha);
  return r;
}

}  // namespace flatlab
