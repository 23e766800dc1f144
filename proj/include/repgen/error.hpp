#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace repgen {

enum class ErrorCode {
  NotCartan,
  NotSymmetrizable,
  SingularCartan,
  UnknownAlgebra,
  GroupTooLarge,
  DimensionCapExceeded,
  SingularDenominator,
  NonUnimodalString,
  NegativeRadicand,
  InconsistentSystem,
  DegenerateMultiplicity,
  UnsupportedDiagram,
  RankMismatch,
  NumericallySingularGram,
  InvalidArgument,
  MalformedFile,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotCartan: return "NotCartan";
    case ErrorCode::NotSymmetrizable: return "NotSymmetrizable";
    case ErrorCode::SingularCartan: return "SingularCartan";
    case ErrorCode::UnknownAlgebra: return "UnknownAlgebra";
    case ErrorCode::GroupTooLarge: return "GroupTooLarge";
    case ErrorCode::DimensionCapExceeded: return "DimensionCapExceeded";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::NonUnimodalString: return "NonUnimodalString";
    case ErrorCode::NegativeRadicand: return "NegativeRadicand";
    case ErrorCode::InconsistentSystem: return "InconsistentSystem";
    case ErrorCode::DegenerateMultiplicity: return "DegenerateMultiplicity";
    case ErrorCode::UnsupportedDiagram: return "UnsupportedDiagram";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::NumericallySingularGram: return "NumericallySingularGram";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MalformedFile: return "MalformedFile";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace repgen
