#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "flatlab/crooked.hpp"
#include "flatlab/error.hpp"
#include "flatlab/euler.hpp"
#include "flatlab/margulis.hpp"
#include "flatlab/random.hpp"
#include "flatlab/rational.hpp"
#include "flatlab/sp4.hpp"
#include "flatlab/words.hpp"

namespace flatlab::cli {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";

/// Parsed input file. Matrix entries keep their exact rational values.
struct InputDocument {
  std::string kind;
  std::vector<std::vector<std::vector<Rational>>> generators;
  std::vector<std::array<Rational, 3>> translations;
  std::optional<int> genus;
  std::optional<std::array<Rational, 3>> mu;
  std::optional<std::uint64_t> seed;
};

/// Rounds to 12 significant digits; NaN and infinities become null.
inline Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? Json(0.0) : Json(r);
}

inline Json vector_json(const LorentzVector& v) { return Json::array({number(v.x), number(v.y), number(v.z)}); }

namespace detail {

inline Rational parse_entry(const Json& j, const std::string& field) {
  try {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number_float()) return parse_rational(j.dump());
  } catch (const Error&) {
  }
  throw Error(ErrorKind::InvalidInput, "field '" + field + "': expected a number or \"p/q\" string, got " + j.dump());
}

inline std::vector<std::vector<Rational>> parse_matrix(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) {
    throw Error(ErrorKind::InvalidInput, "field '" + field + "': expected a " + std::to_string(n) + "x" +
                                             std::to_string(n) + " matrix");
  }
  std::vector<std::vector<Rational>> m;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row_field = field + "[" + std::to_string(i) + "]";
    if (!j[i].is_array() || j[i].size() != n) {
      throw Error(ErrorKind::InvalidInput, "field '" + row_field + "': expected " + std::to_string(n) + " entries");
    }
    std::vector<Rational> row;
    for (std::size_t k = 0; k < n; ++k) row.push_back(parse_entry(j[i][k], row_field + "[" + std::to_string(k) + "]"));
    m.push_back(std::move(row));
  }
  return m;
}

inline std::array<Rational, 3> parse_triple(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorKind::InvalidInput, "field '" + field + "': expected 3 entries");
  return {parse_entry(j[0], field + "[0]"), parse_entry(j[1], field + "[1]"), parse_entry(j[2], field + "[2]")};
}

inline Mat2<Rational> to_mat2(const std::vector<std::vector<Rational>>& m) { return {m[0][0], m[0][1], m[1][0], m[1][1]}; }

}  // namespace detail

/// Checks shapes per kind and determinants: sl2 and affine generators need
/// |det - 1| <= 1e-9 (decimal inputs are rounded), so21 generators must
/// preserve the Lorentz form, sp4 generators must be exactly symplectic.
inline InputDocument parse_input_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::InvalidInput, "top level must be an object");
  InputDocument doc;
  if (!j.contains("kind") || !j["kind"].is_string()) throw Error(ErrorKind::InvalidInput, "field 'kind': missing");
  doc.kind = j["kind"].get<std::string>();
  std::size_t n = 0;
  if (doc.kind == "sl2" || doc.kind == "affine") {
    n = 2;
  } else if (doc.kind == "so21") {
    n = 3;
  } else if (doc.kind == "sp4") {
    n = 4;
  } else {
    throw Error(ErrorKind::InvalidInput, "field 'kind': expected sl2, so21, affine or sp4, got '" + doc.kind + "'");
  }
  if (j.contains("generators")) {
    if (!j["generators"].is_array()) throw Error(ErrorKind::InvalidInput, "field 'generators': expected a list");
    for (std::size_t i = 0; i < j["generators"].size(); ++i) {
      const std::string field = "generators[" + std::to_string(i) + "]";
      auto m = detail::parse_matrix(j["generators"][i], n, field);
      if (n == 2) {
        const double det = to_double(detail::to_mat2(m).det());
        if (std::abs(det - 1.0) > 1e-9) {
          throw Error(ErrorKind::BadDeterminant, "field '" + field + "': determinant " + std::to_string(det) + " != 1");
        }
      } else if (n == 3) {
        Mat3<double> d;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) d.e[r][c] = to_double(m[r][c]);
        try {
          LorentzIsometry check(d);
        } catch (const Error& e) {
          throw Error(ErrorKind::NotIsometry, "field '" + field + "': matrix does not preserve the Lorentz form");
        }
      } else {
        Sp4Matrix s;
        for (int r = 0; r < 4; ++r)
          for (int c = 0; c < 4; ++c) s.m[r][c] = m[r][c];
        if (!symplectic_check(s)) throw Error(ErrorKind::InvalidInput, "field '" + field + "': matrix is not symplectic");
      }
      doc.generators.push_back(std::move(m));
    }
  }
  if (doc.generators.empty() && !(doc.kind == "sp4" && j.contains("mu"))) {
    throw Error(ErrorKind::InvalidInput, "field 'generators': missing or empty");
  }
  if (j.contains("translations")) {
    if (!j["translations"].is_array()) throw Error(ErrorKind::InvalidInput, "field 'translations': expected a list");
    for (std::size_t i = 0; i < j["translations"].size(); ++i) {
      doc.translations.push_back(detail::parse_triple(j["translations"][i], "translations[" + std::to_string(i) + "]"));
    }
  }
  if (doc.kind == "affine") {
    if (!j.contains("translations")) throw Error(ErrorKind::InvalidInput, "field 'translations': required for kind affine");
    if (doc.translations.size() != doc.generators.size()) {
      throw Error(ErrorKind::InvalidInput, "field 'translations': need one translation per generator");
    }
  }
  if (j.contains("genus")) {
    if (!j["genus"].is_number_integer() || j["genus"].get<int>() < 1) {
      throw Error(ErrorKind::InvalidInput, "field 'genus': expected a positive integer");
    }
    doc.genus = j["genus"].get<int>();
  }
  if (j.contains("mu")) doc.mu = detail::parse_triple(j["mu"], "mu");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw Error(ErrorKind::InvalidInput, "field 'seed': expected a non-negative integer");
    doc.seed = j["seed"].get<std::uint64_t>();
  }
  return doc;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline InputDocument parse_input(const std::string& path) { return parse_input_text(read_file(path)); }

inline std::vector<Mat2<double>> sl2_generators(const InputDocument& doc) {
  if (doc.kind != "sl2" && doc.kind != "affine") {
    throw Error(ErrorKind::InvalidInput, "field 'kind': this command needs sl2 or affine generators");
  }
  std::vector<Mat2<double>> out;
  for (const auto& m : doc.generators) out.push_back(to_double(detail::to_mat2(m)));
  return out;
}

/// Affine deformation from an affine document, or from an sp4 document whose
/// generators are block upper-triangular (or from its mu parameters).
inline AffineDeformation deformation_of(const InputDocument& doc) {
  if (doc.kind == "affine") {
    std::vector<LorentzVector> t;
    for (const auto& v : doc.translations) t.push_back(to_lorentz(v));
    return AffineDeformation(sl2_generators(doc), t);
  }
  if (doc.kind == "sp4") {
    if (doc.generators.empty()) return arithmetic_example({(*doc.mu)[0], (*doc.mu)[1], (*doc.mu)[2]}).def;
    std::vector<Mat2<double>> lin;
    std::vector<LorentzVector> t;
    for (const auto& m : doc.generators) {
      Sp4Matrix s;
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) s.m[r][c] = m[r][c];
      const Sp4Affine a = sp4_to_affine(s);
      lin.push_back(to_double(s.block(0, 0)));
      t.push_back(a.affine.trans);
    }
    return AffineDeformation(lin, t);
  }
  throw Error(ErrorKind::InvalidInput, "field 'kind': this command needs affine or sp4 input");
}

inline Json spectrum_json(const SignSpectrum& s) {
  return {{"max_len", s.max_len},
          {"positive", s.positive},
          {"negative", s.negative},
          {"zero", s.zero},
          {"skipped_nonhyperbolic", s.skipped_nonhyperbolic},
          {"min_normalized", number(s.min_normalized)},
          {"max_normalized", number(s.max_normalized)},
          {"verdict", std::string(to_string(s.verdict))}};
}

inline Json record_json(const InvariantRecord& r) {
  return {{"word", r.word.str()},
          {"class", std::string(to_string(r.klass))},
          {"ell", number(r.ell)},
          {"alpha", number(r.alpha)},
          {"normalized", number(r.normalized)}};
}

inline Json rational_matrix_json(const std::vector<std::vector<Rational>>& m) {
  Json rows = Json::array();
  for (const auto& row : m) {
    Json r = Json::array();
    for (const auto& x : row) r.push_back(to_string(x));
    rows.push_back(r);
  }
  return rows;
}

inline Json sp4_json(const Sp4Matrix& s) {
  std::vector<std::vector<Rational>> m(4, std::vector<Rational>(4));
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) m[r][c] = s.m[r][c];
  return rational_matrix_json(m);
}

inline Json exact_affine_json(const Sp4Affine& a) {
  std::vector<std::vector<Rational>> lin(3, std::vector<Rational>(3));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) lin[r][c] = a.exact.linear.e[r][c];
  Json t = Json::array();
  for (const auto& x : a.exact.trans) t.push_back(to_string(x));
  return {{"linear", rational_matrix_json(lin)}, {"translation", t}};
}

inline std::vector<Point2> read_polyline_csv(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::vector<Point2> pts;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (lineno == 1 && !cells.empty() && !cells.back().empty() && std::isalpha(static_cast<unsigned char>(cells.back()[0]))) {
      continue;
    }
    if (cells.size() < 2) throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(lineno) + ": expected x,y");
    try {
      pts.push_back({std::stod(cells[cells.size() - 2]), std::stod(cells[cells.size() - 1])});
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(lineno) + ": bad number");
    }
  }
  return pts;
}

inline SlicePlane parse_plane(const std::string& text) {
  const auto eq = text.find('=');
  if (eq != 1 || (text[0] != 'x' && text[0] != 'y' && text[0] != 'z')) {
    throw Error(ErrorKind::InvalidInput, "--plane: expected x=c, y=c or z=c, got '" + text + "'");
  }
  SlicePlane p;
  p.axis = text[0] - 'x';
  p.value = to_double(parse_rational(text.substr(2)));
  return p;
}

inline std::string csv_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

struct Outcome {
  int exit_code{0};
  std::string out;
  std::string err;
};

inline int exit_code_for(ErrorKind k) { return is_numeric_failure(k) ? 2 : 1; }

/// Parses flags, runs one subcommand and renders the report. Never throws.
inline Outcome run(const std::vector<std::string>& args) {
  CLI::App app{"flat-lab: Euler numbers of flat bundles, Margulis invariants, crooked planes"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string input, mode = "projective", plane = "z=1", out_path, polyline;
  int genus = 0, max_len = 4, sp4_max_len = 6;
  long samples = 10000;
  std::uint64_t seed = 0;
  double extent = 5.0, range = 10.0;
  std::vector<std::string> mu{"1", "1", "1"};
  std::vector<double> vertex{0, 0, 0}, director{0, 1, 0};

  auto* euler = app.add_subcommand("euler", "Euler number of a surface-group representation");
  euler->add_option("--input", input, "JSON input file (kind sl2)")->required();
  euler->add_option("--mode", mode, "projective (period pi) or linear (period 2 pi)")
      ->capture_default_str()
      ->check(CLI::IsMember({"projective", "linear"}));
  euler->add_option("--genus", genus, "surface genus; 0 takes it from the input or from the generator count")
      ->capture_default_str();

  auto* margulis = app.add_subcommand("margulis", "Margulis invariants of conjugacy classes");
  margulis->add_option("--input", input, "JSON input file (kind affine or sp4)")->required();
  margulis->add_option("--max-word-len", max_len, "longest cyclic word examined")->capture_default_str();

  auto* proper = app.add_subcommand("proper", "sign spectrum of Margulis invariants");
  proper->add_option("--input", input, "JSON input file (kind affine or sp4)")->required();
  proper->add_option("--max-word-len", max_len, "longest cyclic word examined")->capture_default_str();

  auto* sp4 = app.add_subcommand("sp4", "level two arithmetic example in Sp(4,Z)");
  sp4->add_option("--mu", mu, "three rational parameters")->expected(3)->capture_default_str();
  sp4->add_option("--max-word-len", sp4_max_len, "longest cyclic word examined")->capture_default_str();

  auto* slice = app.add_subcommand("crooked-slice", "slice a crooked plane by a coordinate plane");
  slice->add_option("--vertex", vertex, "vertex p")->expected(3)->capture_default_str();
  slice->add_option("--director", director, "spacelike director v")->expected(3)->capture_default_str();
  slice->add_option("--plane", plane, "slicing plane x=c, y=c or z=c")->capture_default_str();
  slice->add_option("--extent", extent, "half width of the clipping square")->capture_default_str();
  slice->add_option("--out", out_path, "CSV output path (piece_id,x,y); empty writes no file")->capture_default_str();

  auto* defect = app.add_subcommand("estimate-defect", "largest observed Milnor defect over random SL2 pairs");
  defect->add_option("--samples", samples, "number of random pairs")->capture_default_str();
  defect->add_option("--seed", seed, "random seed")->capture_default_str();
  defect->add_option("--range", range, "entries drawn from [-range, range]")->capture_default_str();

  auto* turning = app.add_subcommand("turning", "turning number of a closed polyline");
  turning->add_option("--polyline", polyline, "CSV file with x,y rows")->required();

  Outcome o;
  std::vector<const char*> argv{"flat-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream out, err;
    const int code = app.exit(e, out, err);
    o.out = out.str();
    o.err = err.str();
    o.exit_code = code == 0 ? 0 : 1;
    return o;
  }

  Json report;
  Json inputs = Json::object();
  Json results = Json::object();
  Json warnings = Json::array();
  try {
    if (euler->parsed()) {
      report["command"] = "euler";
      const InputDocument doc = parse_input(input);
      const auto gens = sl2_generators(doc);
      int g = genus > 0 ? genus : doc.genus.value_or(static_cast<int>(gens.size()) / 2);
      const EulerMode m = mode == "linear" ? EulerMode::Linear : EulerMode::Projective;
      const Representation rep(m == EulerMode::Linear ? RepKind::Linear2 : RepKind::Projective2, gens);
      inputs = {{"input", input}, {"mode", mode}, {"genus", g}};
      const double relator = surface_relator_defect(rep, g);
      const EulerReport r = euler_number(rep, g, m);
      results = {{"e", r.e},
                 {"bound", r.bound},
                 {"genus", r.genus},
                 {"mode", std::string(to_string(r.mode))},
                 {"raw_lift", number(r.raw_lift)},
                 {"period", number(period_of(m))},
                 {"relator_defect", number(relator)},
                 {"satisfies", r.satisfies}};
    } else if (margulis->parsed() || proper->parsed()) {
      report["command"] = margulis->parsed() ? "margulis" : "proper";
      const InputDocument doc = parse_input(input);
      const AffineDeformation def = deformation_of(doc);
      inputs = {{"input", input}, {"max_word_len", max_len}};
      if (max_len < 1) throw Error(ErrorKind::InvalidInput, "--max-word-len must be at least 1");
      const auto records = class_invariants(def, max_len);
      if (margulis->parsed()) {
        Json rows = Json::array();
        for (const auto& r : records) rows.push_back(record_json(r));
        results = {{"records", rows}};
      } else {
        results = spectrum_json(sign_spectrum(records, max_len));
        warnings.push_back("a uniform verdict is evidence of properness, not a certificate");
      }
    } else if (sp4->parsed()) {
      report["command"] = "sp4";
      const Sp4ExampleParams p{parse_rational(mu[0]), parse_rational(mu[1]), parse_rational(mu[2])};
      inputs = {{"mu", Json::array({to_string(p.mu1), to_string(p.mu2), to_string(p.mu3)})},
                {"max_word_len", sp4_max_len}};
      if (sp4_max_len < 1) throw Error(ErrorKind::InvalidInput, "--max-word-len must be at least 1");
      const ArithmeticExample ex = arithmetic_example(p);
      const SignSpectrum s = sign_spectrum(ex.def, sp4_max_len);
      results = {{"generators", Json::array({sp4_json(ex.g1), sp4_json(ex.g2)})},
                 {"symplectic", symplectic_check(ex.g1) && symplectic_check(ex.g2)},
                 {"affine", Json::array({exact_affine_json(ex.affine1), exact_affine_json(ex.affine2)})},
                 {"spectrum", spectrum_json(s)}};
    } else if (slice->parsed()) {
      report["command"] = "crooked-slice";
      const SlicePlane sp = parse_plane(plane);
      const CrookedPlane c = make_crooked_plane({vertex[0], vertex[1], vertex[2]}, {director[0], director[1], director[2]});
      inputs = {{"vertex", Json::array({number(vertex[0]), number(vertex[1]), number(vertex[2])})},
                {"director", Json::array({number(director[0]), number(director[1]), number(director[2])})},
                {"plane", plane},
                {"extent", number(extent)},
                {"out", out_path}};
      const auto lines = slice_polylines(c, sp, extent);
      Json pieces = Json::array();
      std::string csv = "piece_id,x,y\n";
      for (std::size_t i = 0; i < lines.size(); ++i) {
        Json pts = Json::array();
        for (const Point2& q : lines[i]) {
          pts.push_back(Json::array({number(q.x), number(q.y)}));
          csv += std::to_string(i) + "," + csv_number(q.x) + "," + csv_number(q.y) + "\n";
        }
        pieces.push_back(pts);
      }
      if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error(ErrorKind::InvalidInput, "cannot write '" + out_path + "'");
        f << csv;
      }
      results = {{"pieces", static_cast<long>(lines.size())}, {"polylines", pieces}};
    } else if (defect->parsed()) {
      report["command"] = "estimate-defect";
      inputs = {{"samples", samples}, {"seed", seed}, {"range", number(range)}};
      if (samples < 1 || !(range > 0)) throw Error(ErrorKind::InvalidInput, "--samples and --range must be positive");
      Rng rng(seed);
      double worst = 0.0, worst_disp = 0.0;
      for (long i = 0; i < samples; ++i) {
        const Mat2<double> g1 = random_sl2(rng, range), g2 = random_sl2(rng, range);
        worst = std::max(worst, milnor_estimate_defect(g1, g2));
        worst_disp = std::max(worst_disp, displacement_defect(g1, g2));
      }
      results = {{"max_defect", number(worst)},
                 {"bound", number(kPi / 2)},
                 {"below_bound", worst < kPi / 2},
                 {"max_displacement_defect", number(worst_disp)}};
    } else if (turning->parsed()) {
      report["command"] = "turning";
      inputs = {{"polyline", polyline}};
      const auto pts = read_polyline_csv(polyline);
      const double t = turning_number(pts);
      const double rounded = std::round(t);
      if (std::abs(t - rounded) > 1e-9) warnings.push_back("turning sum is not an integer");
      results = {{"turning_number", static_cast<long>(rounded)}, {"raw", number(t)}, {"vertices", static_cast<long>(pts.size())}};
    }
  } catch (const Error& e) {
    o.exit_code = exit_code_for(e.kind());
    o.err = std::string("flat-lab: error: ") + e.what() + "\n";
    return o;
  } catch (const std::exception& e) {
    o.exit_code = 1;
    o.err = std::string("flat-lab: error: ") + e.what() + "\n";
    return o;
  }
  report["inputs"] = inputs;
  report["results"] = results;
  report["warnings"] = warnings;
  report["version"] = kVersion;
  o.out = report.dump(2) + "\n";
  return o;
}

}  // namespace flatlab::cli
