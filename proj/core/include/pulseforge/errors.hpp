#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pulseforge {

enum class ErrorCode {
  InvalidArgument,
  OutsideFamily,
  NegativeRate,
  UnphysicalState,
  InfeasibleTarget,
  DenominatorCollapse,
  SingularMatrix,
  ColumnSumMismatch,
  ConfigError,
  IoError,
};

// Machine-readable category name, e.g. "InfeasibleTarget".
std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pulseforge
