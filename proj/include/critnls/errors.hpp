#ifndef CRITNLS_ERRORS_HPP
#define CRITNLS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace critnls {

enum class ErrorCode {
  // nonlinearity
  ExponentOutOfRange,
  NonpositiveCoefficient,
  NonincreasingExponents,
  DimensionTooSmall,
  EmptyPerturbation,
  // field
  QOutOfRange,
  GridMismatch,
  // functionals / variational
  NonpositiveLambda,
  ZeroField,
  BracketFailure,
  NoBracket,
  NonconvergedODE,
  // evolution
  FixedPointDiverged,
  InsufficientStates,
  InvarianceViolated,
  // exponents
  POutOfRange,
  DegenerateDenominator,
  // cli
  ConfigParse,
  IOFailure,
};

inline const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ExponentOutOfRange: return "ExponentOutOfRange";
    case ErrorCode::NonpositiveCoefficient: return "NonpositiveCoefficient";
    case ErrorCode::NonincreasingExponents: return "NonincreasingExponents";
    case ErrorCode::DimensionTooSmall: return "DimensionTooSmall";
    case ErrorCode::EmptyPerturbation: return "EmptyPerturbation";
    case ErrorCode::QOutOfRange: return "QOutOfRange";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::NonpositiveLambda: return "NonpositiveLambda";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::BracketFailure: return "BracketFailure";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::NonconvergedODE: return "NonconvergedODE";
    case ErrorCode::FixedPointDiverged: return "FixedPointDiverged";
    case ErrorCode::InsufficientStates: return "InsufficientStates";
    case ErrorCode::InvarianceViolated: return "InvarianceViolated";
    case ErrorCode::POutOfRange: return "POutOfRange";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::IOFailure: return "IOFailure";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace critnls

#endif  // CRITNLS_ERRORS_HPP
