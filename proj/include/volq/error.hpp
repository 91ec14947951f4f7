#pragma once

#include <stdexcept>
#include <string>

namespace volq {

enum class ErrorCode {
  InvalidArgument,
  TooShort,
  NonPositiveValue,
  NonFiniteValue,
  DegenerateVariance,
  SingularRegression,
  SingularHessian,
  InvalidParams,
  InvalidFit,
  NonConvergence,
  NonFiniteObjective,
  NumericalOverflow,
  LengthMismatch,
  FileNotFound,
  ParseError,
};

const char* to_string(ErrorCode code) noexcept;

// Every error names the module and operation that raised it, e.g.
// "garch-engine/fit_garch: series too short (10 < 50)".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string module, std::string operation,
        const std::string& detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& module() const noexcept { return module_; }
  const std::string& operation() const noexcept { return operation_; }

 private:
  ErrorCode code_;
  std::string module_;
  std::string operation_;
};

}  // namespace volq
