#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pga {

enum class ErrorCode {
  ValueNotAboveBaseFee,
  NonPositiveFee,
  RateOutOfRange,
  TooFewAgents,
  InvalidArgument,
  IndexOutOfRange,
  UnknownPreset,
  MissingPresetRate,
  DegenerateNoRevertCost,
  CostTooLarge,
  OutOfSupport,
  NotApplicable,
  ConfigInvalid,
  NumericalFailure,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as pga::Error; the code is stable and is what
// tests and the CLI dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pga
