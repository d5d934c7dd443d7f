#pragma once

#include <stdexcept>
#include <string>

namespace haekit {

/// Failure modes shared by all modules. Each condition carries a stable code
/// so callers (and the CLI exit-code mapping) never have to match on message
/// text.
enum class ErrorCode {
  MalformedHeader,
  ValueCountMismatch,
  NonFiniteValue,
  ValueOutOfRange,
  OutOfExtent,
  NodataNeighborhood,
  GeoidCoverageGap,
  MissingContext,
  UnsupportedPath,
  NonPositivePressure,
  EmptyInput,
  KTooLarge,
  DegenerateModel,
  OutOfDomain,
  NonPositiveInput,
  NegativeLoad,
  NonPositiveHoldingTime,
  MalformedRow,
  MissingColumn,
  SegmentTooShort,
  InsufficientData,
  InvalidArgument,
  IoError,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::ValueCountMismatch: return "ValueCountMismatch";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::ValueOutOfRange: return "ValueOutOfRange";
    case ErrorCode::OutOfExtent: return "OutOfExtent";
    case ErrorCode::NodataNeighborhood: return "NodataNeighborhood";
    case ErrorCode::GeoidCoverageGap: return "GeoidCoverageGap";
    case ErrorCode::MissingContext: return "MissingContext";
    case ErrorCode::UnsupportedPath: return "UnsupportedPath";
    case ErrorCode::NonPositivePressure: return "NonPositivePressure";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::DegenerateModel: return "DegenerateModel";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::NonPositiveInput: return "NonPositiveInput";
    case ErrorCode::NegativeLoad: return "NegativeLoad";
    case ErrorCode::NonPositiveHoldingTime: return "NonPositiveHoldingTime";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::SegmentTooShort: return "SegmentTooShort";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace haekit
