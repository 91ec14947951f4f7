#include "volq/error.hpp"

namespace volq {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::DegenerateVariance: return "DegenerateVariance";
    case ErrorCode::SingularRegression: return "SingularRegression";
    case ErrorCode::SingularHessian: return "SingularHessian";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::InvalidFit: return "InvalidFit";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string module, std::string operation,
             const std::string& detail)
    : std::runtime_error(module + "/" + operation + ": " + detail),
      code_(code),
      module_(std::move(module)),
      operation_(std::move(operation)) {}

}  // namespace volq
