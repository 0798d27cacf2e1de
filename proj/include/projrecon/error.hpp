#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace projrecon {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  DuplicatePoints,
  NonpositiveWeight,
  WeightSumMismatch,
  RankDeficient,
  TupleBudgetExceeded,
  Infeasible,
  SupercriticalRegime,
  DegenerateInstance,
  InvalidOrder,
  ConfigError,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-readable code; every failure raised by the
/// library is one of these.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace projrecon
