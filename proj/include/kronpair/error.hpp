#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kronpair {

enum class ErrorCode {
  AmbientMismatch,
  InvalidCoordinate,
  InvalidArgument,
  BudgetExhausted,
  LevelNotCovered,
  NotDivisible,
  RatioTooSmall,
  LadderGapViolated,
  NotInjective,
  IndexCollision,
  SearchBudget,
  ConditionBViolated,
  ImageFinite,
  OrderTooSmall,
  ProbeInconclusive,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above. `stage`
/// is set by the staged constructions (ladder gap, condition (b) reselection).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::optional<std::size_t> stage = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), stage_(stage) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> stage() const noexcept { return stage_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> stage_;
};

}  // namespace kronpair
