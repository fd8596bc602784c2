#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wr {

enum class ErrorCode {
  InvalidArgument,
  // data
  MissingColumn,
  NonMonotonicTimestamps,
  EmptyAfterFiltering,
  PeriodTooLong,
  DegenerateFeature,
  InvalidRegimeSpec,
  WindowNotCovered,
  TooFewFarms,
  EmptyCluster,
  ShapeMismatch,
  KTooLarge,
  EmptyClass,
  SingleCluster,
  MissingComponent,
  InsufficientHistory,
  EmptySplit,
  LengthMismatch,
  EmptyInput,
  VersionMismatch,
  CorruptBlob,
  IoError,
  // numerical
  NonFiniteLoss,
  CoincidentCentroids,
  ZeroVariance,
  CholeskyFailure,
  NonFiniteMLL,
};

enum class ErrorCategory { Usage, Data, Numerical };

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::NonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::EmptyAfterFiltering: return "EmptyAfterFiltering";
    case ErrorCode::PeriodTooLong: return "PeriodTooLong";
    case ErrorCode::DegenerateFeature: return "DegenerateFeature";
    case ErrorCode::InvalidRegimeSpec: return "InvalidRegimeSpec";
    case ErrorCode::WindowNotCovered: return "WindowNotCovered";
    case ErrorCode::TooFewFarms: return "TooFewFarms";
    case ErrorCode::EmptyCluster: return "EmptyCluster";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::SingleCluster: return "SingleCluster";
    case ErrorCode::MissingComponent: return "MissingComponent";
    case ErrorCode::InsufficientHistory: return "InsufficientHistory";
    case ErrorCode::EmptySplit: return "EmptySplit";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptBlob: return "CorruptBlob";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::CoincidentCentroids: return "CoincidentCentroids";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::CholeskyFailure: return "CholeskyFailure";
    case ErrorCode::NonFiniteMLL: return "NonFiniteMLL";
  }
  return "Unknown";
}

constexpr ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
      return ErrorCategory::Usage;
    case ErrorCode::NonFiniteLoss:
    case ErrorCode::CoincidentCentroids:
    case ErrorCode::ZeroVariance:
    case ErrorCode::CholeskyFailure:
    case ErrorCode::NonFiniteMLL:
      return ErrorCategory::Numerical;
    default:
      return ErrorCategory::Data;
  }
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace wr
