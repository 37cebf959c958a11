#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tlab {

// Every failure surfaced by the library carries one of these codes. The CLI
// reports the code name verbatim in its error JSON.
enum class ErrorCode {
  kInvalidConfig,
  kUnknownScheme,
  kEmptyCorpus,
  kMalformedFile,
  kDimensionMismatch,
  kShapeMismatch,
  kNumericFailure,
  kNonScalarLoss,
  kEmptySequence,
  kAllMasked,
  kInvalidRate,
  kEmptyDataset,
  kLengthMismatch,
  kUnknownLabel,
  kEmptyMatrix,
  kTooFewExamples,
  kZeroVariance,
  kTooManyTokens,
  kModelFailure,
  kBadPartition,
  kDegenerateSamples,
  kMalformedCsv,
  kDuplicateId,
  kBadRatios,
  kHashMismatch,
  kIo,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  std::string_view code_name() const { return error_code_name(code_); }
  // without the code prefix
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace tlab
