#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace flatlab {

/// Failure categories. The names are part of the CLI contract: diagnostics
/// print them verbatim.
enum class ErrorKind {
  NotHyperbolic,
  NotSpacelike,
  NotIsometry,
  IndexOutOfRange,
  WrongGeneratorCount,
  SubdivisionLimit,
  RelatorFailed,
  NonIntegralLift,
  DegenerateVertex,
  DepthExceeded,
  NotSymmetric,
  BadDeterminant,
  NotAffineChart,
  NonSymmetricTranslation,
  InvalidInput,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHyperbolic: return "NotHyperbolic";
    case ErrorKind::NotSpacelike: return "NotSpacelike";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::WrongGeneratorCount: return "WrongGeneratorCount";
    case ErrorKind::SubdivisionLimit: return "SubdivisionLimit";
    case ErrorKind::RelatorFailed: return "RelatorFailed";
    case ErrorKind::NonIntegralLift: return "NonIntegralLift";
    case ErrorKind::DegenerateVertex: return "DegenerateVertex";
    case ErrorKind::DepthExceeded: return "DepthExceeded";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::BadDeterminant: return "BadDeterminant";
    case ErrorKind::NotAffineChart: return "NotAffineChart";
    case ErrorKind::NonSymmetricTranslation: return "NonSymmetricTranslation";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

/// Numeric failures map to CLI exit code 2; everything else is an input error.
constexpr bool is_numeric_failure(ErrorKind kind) noexcept {
  return kind == ErrorKind::NonIntegralLift || kind == ErrorKind::SubdivisionLimit ||
         kind == ErrorKind::DepthExceeded;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flatlab
