#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gdht {

enum class ErrorKind {
  NotSquare,
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  NonFiniteEntry,
  ShapeMismatch,
  BudgetOutOfRange,
  InvalidConfig,
  PositiveDefiniteRecoveryFailed,
  SliceTooSmall,
  RhoOutOfRange,
  ZeroColumn,
  GridTooSmall,
  ParseError,
  NonPositivePrice,
  TooFewRows,
  IoError,
  RaggedRows,
  UnknownKey,
  RangeError,
  MissingRequired,
  UnknownCommand,
};

std::string_view kind_name(ErrorKind kind) noexcept;

// Every failure surfaced by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gdht
