#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "flatlab/error.hpp"
#include "flatlab/lorentz.hpp"

namespace flatlab {

/// Generator index (1-based) with exponent +1 or -1.
struct Letter {
  int gen{1};
  int exp{1};

  Letter inverse() const { return {gen, -exp}; }
  /// Order key: a < A < b < B < ...
  int code() const { return 2 * (gen - 1) + (exp < 0 ? 1 : 0); }
  static Letter from_code(int code) { return {code / 2 + 1, code % 2 == 0 ? 1 : -1}; }
  friend bool operator==(const Letter&, const Letter&) = default;
};

/// Freely reduced word in a free group. Printed with a, b, c, ... for
/// generators and A, B, C, ... for their inverses.
class Word {
 public:
  Word() = default;

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const Letter& operator[](std::size_t i) const { return letters_[i]; }

  int max_generator() const {
    int m = 0;
    for (const Letter& l : letters_) m = std::max(m, l.gen);
    return m;
  }

  Word inverse() const {
    Word w;
    w.letters_.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(it->inverse());
    return w;
  }

  friend Word operator*(const Word& u, const Word& v) {
    Word w = u;
    for (const Letter& l : v.letters_) w.push_reduced(l);
    return w;
  }

  Word power(int n) const {
    const Word base = n < 0 ? inverse() : *this;
    Word w;
    for (int i = 0; i < std::abs(n); ++i) w = w * base;
    return w;
  }

  std::string str() const {
    if (letters_.empty()) return "e";
    std::string s;
    for (const Letter& l : letters_) {
      const char c = static_cast<char>('a' + l.gen - 1);
      s.push_back(l.exp > 0 ? c : static_cast<char>(std::toupper(c)));
    }
    return s;
  }

  friend bool operator==(const Word&, const Word&) = default;
  friend bool operator<(const Word& u, const Word& v) {
    if (u.size() != v.size()) return u.size() < v.size();
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (u[i].code() != v[i].code()) return u[i].code() < v[i].code();
    }
    return false;
  }

 private:
  void push_reduced(const Letter& l) {
    if (!letters_.empty() && letters_.back() == l.inverse()) {
      letters_.pop_back();
    } else {
      letters_.push_back(l);
    }
  }

  std::vector<Letter> letters_;

  friend Word reduce(const std::vector<Letter>& raw, int rank);
};

/// Free reduction. rank <= 0 disables the index check.
inline Word reduce(const std::vector<Letter>& raw, int rank = 0) {
  Word w;
  for (const Letter& l : raw) {
    if (l.gen < 1 || (rank > 0 && l.gen > rank) || (l.exp != 1 && l.exp != -1)) {
      throw Error(ErrorKind::IndexOutOfRange, "letter with generator " + std::to_string(l.gen) +
                                                  " outside rank " + std::to_string(rank));
    }
    w.push_reduced(l);
  }
  return w;
}

/// Parses "aBA" style text; "e" or "" is the empty word.
inline Word parse_word(std::string_view text, int rank = 0) {
  std::vector<Letter> raw;
  if (text == "e") return Word{};
  for (char c : text) {
    if (std::islower(static_cast<unsigned char>(c))) {
      raw.push_back({c - 'a' + 1, 1});
    } else if (std::isupper(static_cast<unsigned char>(c))) {
      raw.push_back({c - 'A' + 1, -1});
    } else {
      throw Error(ErrorKind::InvalidInput, std::string("bad letter '") + c + "' in word");
    }
  }
  return reduce(raw, rank);
}

inline Word generator_word(int gen, int exp = 1) { return reduce({{gen, exp}}); }

inline bool is_cyclically_reduced(const Word& w) {
  return w.size() <= 1 || !(w[0] == w[w.size() - 1].inverse());
}

/// Strips matching first/last letter pairs; the result is conjugate to w.
inline Word cyclic_reduce(const Word& w) {
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && w[lo] == w[hi - 1].inverse()) {
    ++lo;
    --hi;
  }
  std::vector<Letter> raw(w.letters().begin() + static_cast<std::ptrdiff_t>(lo),
                          w.letters().begin() + static_cast<std::ptrdiff_t>(hi));
  return reduce(raw);
}

/// Least word (in enumeration order) among the cyclic rotations of the
/// cyclic reduction of w and of its inverse. Constant on the set
/// {conjugates of w} union {conjugates of w^-1}.
inline Word class_representative(const Word& w) {
  const Word c = cyclic_reduce(w);
  if (c.empty()) return c;
  Word best = c;
  for (const Word& base : {c, c.inverse()}) {
    const auto& ls = base.letters();
    for (std::size_t r = 0; r < ls.size(); ++r) {
      std::vector<Letter> rot(ls.begin() + static_cast<std::ptrdiff_t>(r), ls.end());
      rot.insert(rot.end(), ls.begin(), ls.begin() + static_cast<std::ptrdiff_t>(r));
      Word cand = reduce(rot);
      if (cand < best) best = cand;
    }
  }
  return best;
}

/// Visits every reduced word of length <= max_len in (length, lexicographic)
/// order with a < A < b < B < ...
inline void for_each_word(int rank, int max_len, bool cyclically_reduced_only,
                          const std::function<void(const Word&)>& visit) {
  if (rank < 1 || max_len < 0) return;
  std::vector<Letter> cur;
  std::function<void(int)> extend = [&](int remaining) {
    if (remaining == 0) {
      Word w = reduce(cur);
      if (!cyclically_reduced_only || is_cyclically_reduced(w)) visit(w);
      return;
    }
    for (int code = 0; code < 2 * rank; ++code) {
      const Letter l = Letter::from_code(code);
      if (!cur.empty() && cur.back() == l.inverse()) continue;
      cur.push_back(l);
      extend(remaining - 1);
      cur.pop_back();
    }
  };
  for (int len = 0; len <= max_len; ++len) extend(len);
}

inline std::vector<Word> enumerate_words(int rank, int max_len, bool cyclically_reduced_only = false) {
  std::vector<Word> out;
  for_each_word(rank, max_len, cyclically_reduced_only, [&](const Word& w) { out.push_back(w); });
  return out;
}

/// One representative per nontrivial class of cyclic words up to inversion.
inline std::vector<Word> class_representatives(int rank, int max_len) {
  std::vector<Word> out;
  for_each_word(rank, max_len, true, [&](const Word& w) {
    if (!w.empty() && class_representative(w) == w) out.push_back(w);
  });
  return out;
}

/// A1 B1 A1^-1 B1^-1 ... Ag Bg Ag^-1 Bg^-1 on generators 1..2g.
inline Word commutator_product_word(int genus) {
  std::vector<Letter> raw;
  for (int i = 0; i < genus; ++i) {
    const int a = 2 * i + 1, b = 2 * i + 2;
    raw.insert(raw.end(), {{a, 1}, {b, 1}, {a, -1}, {b, -1}});
  }
  return reduce(raw);
}

enum class RepKind { Linear2, Projective2, Lorentz3 };

inline std::string_view to_string(RepKind k) {
  switch (k) {
    case RepKind::Linear2: return "Linear2";
    case RepKind::Projective2: return "Projective2";
    case RepKind::Lorentz3: return "Lorentz3";
  }
  return "Unknown";
}

/// Generator images of a free group. Linear2 and Projective2 carry SL2
/// matrices; Lorentz3 carries SO(2,1) matrices.
class Representation {
 public:
  Representation(RepKind kind, std::vector<Mat2<double>> generators) : kind_(kind), sl2_(std::move(generators)) {
    if (kind_ == RepKind::Lorentz3) throw Error(ErrorKind::InvalidInput, "Lorentz3 representation needs 3x3 generators");
    if (sl2_.empty()) throw Error(ErrorKind::InvalidInput, "representation has no generators");
  }
  explicit Representation(std::vector<LorentzIsometry> generators)
      : kind_(RepKind::Lorentz3), so21_(std::move(generators)) {
    if (so21_.empty()) throw Error(ErrorKind::InvalidInput, "representation has no generators");
  }

  RepKind kind() const { return kind_; }
  int rank() const { return static_cast<int>(kind_ == RepKind::Lorentz3 ? so21_.size() : sl2_.size()); }
  bool is_planar() const { return kind_ != RepKind::Lorentz3; }
  const std::vector<Mat2<double>>& sl2_generators() const { return sl2_; }

  std::vector<LorentzIsometry> lorentz_generators() const {
    if (kind_ == RepKind::Lorentz3) return so21_;
    std::vector<LorentzIsometry> out;
    for (const auto& g : sl2_) out.push_back(sl2_to_so21(g));
    return out;
  }

  Representation with_kind(RepKind kind) const {
    if (!is_planar() || kind == RepKind::Lorentz3) return Representation(lorentz_generators());
    return Representation(kind, sl2_);
  }

 private:
  RepKind kind_;
  std::vector<Mat2<double>> sl2_;
  std::vector<LorentzIsometry> so21_;
};

inline void check_rank(const Word& w, int rank) {
  if (w.max_generator() > rank) {
    throw Error(ErrorKind::IndexOutOfRange, "word " + w.str() + " uses a generator beyond rank " + std::to_string(rank));
  }
}

/// Product of generator images; inverse letters use g.inverse().
template <class G>
G evaluate(const std::vector<G>& generators, const Word& w, const G& identity) {
  check_rank(w, static_cast<int>(generators.size()));
  G r = identity;
  for (const Letter& l : w.letters()) {
    const G& g = generators[static_cast<std::size_t>(l.gen - 1)];
    r = r * (l.exp > 0 ? g : g.inverse());
  }
  return r;
}

inline Mat2<double> evaluate_sl2(const Representation& rep, const Word& w) {
  if (!rep.is_planar()) throw Error(ErrorKind::InvalidInput, "representation has no SL2 generators");
  return evaluate(rep.sl2_generators(), w, Mat2<double>::identity());
}

inline LorentzIsometry evaluate_lorentz(const Representation& rep, const Word& w) {
  return evaluate(rep.lorentz_generators(), w, LorentzIsometry{});
}

/// x -> linear(x) + trans.
struct AffineMap {
  LorentzIsometry linear;
  LorentzVector trans;

  LorentzVector operator()(const LorentzVector& x) const { return linear * x + trans; }

  AffineMap inverse() const {
    const LorentzIsometry li = linear.inverse();
    return {li, -(li * trans)};
  }

  static AffineMap identity() { return {}; }
  static AffineMap translation(const LorentzVector& t) { return {LorentzIsometry{}, t}; }

  /// (f * g)(x) = f(g(x)).
  friend AffineMap operator*(const AffineMap& f, const AffineMap& g) {
    return {f.linear * g.linear, f.linear * g.trans + f.trans};
  }
};

inline double max_abs_diff(const AffineMap& f, const AffineMap& g) {
  return std::max(max_abs_diff(f.linear, g.linear), max_abs_diff(f.trans, g.trans));
}

/// Linear SL2 generators with one translation per generator.
class AffineDeformation {
 public:
  AffineDeformation(std::vector<Mat2<double>> linear_generators, std::vector<LorentzVector> translations)
      : linear_(std::move(linear_generators)), trans_(std::move(translations)) {
    if (linear_.empty()) throw Error(ErrorKind::InvalidInput, "deformation has no generators");
    if (linear_.size() != trans_.size()) {
      throw Error(ErrorKind::WrongGeneratorCount, "need one translation per linear generator");
    }
    for (std::size_t i = 0; i < linear_.size(); ++i) maps_.push_back({sl2_to_so21(linear_[i]), trans_[i]});
  }

  int rank() const { return static_cast<int>(linear_.size()); }
  const std::vector<Mat2<double>>& linear_generators() const { return linear_; }
  const std::vector<LorentzVector>& translations() const { return trans_; }
  const std::vector<AffineMap>& generators() const { return maps_; }
  Representation linear_representation() const { return Representation(RepKind::Linear2, linear_); }

 private:
  std::vector<Mat2<double>> linear_;
  std::vector<LorentzVector> trans_;
  std::vector<AffineMap> maps_;
};

/// (L(w), u(w)) by composing generator maps, so u(vw) = u(v) + L(v) u(w).
inline AffineMap evaluate_affine(const AffineDeformation& def, const Word& w) {
  return evaluate(def.generators(), w, AffineMap::identity());
}

/// min over s in {I, -I} of max |prod [A_i, B_i] - s| for SL2 kinds;
/// distance to I for Lorentz3.
inline double surface_relator_defect(const Representation& rep, int genus) {
  if (genus < 1 || rep.rank() != 2 * genus) {
    throw Error(ErrorKind::WrongGeneratorCount, "expected " + std::to_string(2 * genus) + " generators, got " +
                                                    std::to_string(rep.rank()));
  }
  const Word w = commutator_product_word(genus);
  if (rep.is_planar()) {
    const Mat2<double> p = evaluate_sl2(rep, w);
    const Mat2<double> id = Mat2<double>::identity();
    return std::min(max_abs_diff(p, id), max_abs_diff(p, -id));
  }
  return max_abs_diff(evaluate_lorentz(rep, w).matrix(), Mat3<double>::identity());
}

}  // namespace flatlab
