#include "tlab/common/error.h"

namespace tlab {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kUnknownScheme: return "UnknownScheme";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kNumericFailure: return "NumericFailure";
    case ErrorCode::kNonScalarLoss: return "NonScalarLoss";
    case ErrorCode::kEmptySequence: return "EmptySequence";
    case ErrorCode::kAllMasked: return "AllMasked";
    case ErrorCode::kInvalidRate: return "InvalidRate";
    case ErrorCode::kEmptyDataset: return "EmptyDataset";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kEmptyMatrix: return "EmptyMatrix";
    case ErrorCode::kTooFewExamples: return "TooFewExamples";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kTooManyTokens: return "TooManyTokens";
    case ErrorCode::kModelFailure: return "ModelFailure";
    case ErrorCode::kBadPartition: return "BadPartition";
    case ErrorCode::kDegenerateSamples: return "DegenerateSamples";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kBadRatios: return "BadRatios";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code),
      message_(message) {}

}  // namespace tlab
