#include "pulseforge/errors.hpp"

namespace pulseforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OutsideFamily: return "OutsideFamily";
    case ErrorCode::NegativeRate: return "NegativeRate";
    case ErrorCode::UnphysicalState: return "UnphysicalState";
    case ErrorCode::InfeasibleTarget: return "InfeasibleTarget";
    case ErrorCode::DenominatorCollapse: return "DenominatorCollapse";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ColumnSumMismatch: return "ColumnSumMismatch";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pulseforge
