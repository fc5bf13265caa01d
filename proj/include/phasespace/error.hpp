#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phasespace {

// Every failure the library can report. The names are stable: the CLI prints
// them on stderr and the C API maps them one-to-one onto ps_status values.
enum class ErrorCode {
  kInvalidArgument,
  kConfigInvalid,
  kDimensionMismatch,
  kNonSymmetricB,
  kSymplecticDriftExceeded,
  kNonRealResult,
  kSingularDispersion,
  kSingularMatrix,
  kInvalidState,
  kIndexOutOfRange,
  kAsymmetricR,
  kDegreeTooLarge,
  kNegativeProbability,
  kGridTooCoarse,
  kWronskianDrift,
  kBranchTrackingLost,
  kNotPeriodic,
  kNullState,
};

std::string_view error_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace phasespace
