#include "gdht/error.hpp"

namespace gdht {

std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::BudgetOutOfRange: return "BudgetOutOfRange";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
    case ErrorKind::PositiveDefiniteRecoveryFailed: return "PositiveDefiniteRecoveryFailed";
    case ErrorKind::SliceTooSmall: return "SliceTooSmall";
    case ErrorKind::RhoOutOfRange: return "RhoOutOfRange";
    case ErrorKind::ZeroColumn: return "ZeroColumn";
    case ErrorKind::GridTooSmall: return "GridTooSmall";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::NonPositivePrice: return "NonPositivePrice";
    case ErrorKind::TooFewRows: return "TooFewRows";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::RaggedRows: return "RaggedRows";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::MissingRequired: return "MissingRequired";
    case ErrorKind::UnknownCommand: return "UnknownCommand";
  }
  return "Unknown";
}

}  // namespace gdht
