#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>
#include <string>
#include <string_view>

#include "flatlab/error.hpp"

namespace flatlab {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) {
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// Parses "p", "p/q", "-p/q" or a plain decimal such as "-0.125" or "1e-3"
/// into an exact rational. Decimal text is read exactly, never via double.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw Error(ErrorKind::InvalidInput, "not a rational number: '" + std::string(text) + "'");
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_decimal = [&](std::string_view s) -> Rational {
    s = trim(s);
    if (s.empty()) fail();
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
      negative = s.front() == '-';
      s.remove_prefix(1);
    }
    BigInt digits = 0;
    long long scale = 0;
    bool seen_digit = false;
    bool seen_point = false;
    std::size_t i = 0;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (seen_point) ++scale;
        seen_digit = true;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
      } else {
        break;
      }
    }
    if (!seen_digit) fail();
    long long exponent = 0;
    if (i < s.size()) {
      if (s[i] != 'e' && s[i] != 'E') fail();
      std::string_view rest = s.substr(i + 1);
      if (rest.empty()) fail();
      bool exp_negative = false;
      if (rest.front() == '+' || rest.front() == '-') {
        exp_negative = rest.front() == '-';
        rest.remove_prefix(1);
      }
      if (rest.empty() || rest.size() > 6) fail();
      for (char c : rest) {
        if (!std::isdigit(static_cast<unsigned char>(c))) fail();
        exponent = exponent * 10 + (c - '0');
      }
      if (exp_negative) exponent = -exponent;
    }
    const long long power = exponent - scale;
    Rational value(digits);
    BigInt ten_power = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(power < 0 ? -power : power));
    if (power >= 0) {
      value *= Rational(ten_power);
    } else {
      value /= Rational(ten_power);
    }
    return negative ? Rational(-value) : value;
  };

  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text);
  const Rational num = parse_decimal(text.substr(0, slash));
  const Rational den = parse_decimal(text.substr(slash + 1));
  if (den == 0) throw Error(ErrorKind::InvalidInput, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

}  // namespace flatlab
