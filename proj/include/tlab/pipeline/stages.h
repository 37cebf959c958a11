#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>

#include "tlab/common/error.h"
#include "tlab/pipeline/manifest.h"
#include "tlab/pipeline/run_config.h"

namespace tlab::pipeline {

enum class Stage { kPrep, kLabel, kFeaturize, kTrain, kTune, kEval, kBenchmark, kExplain, kReport };

std::string_view stage_name(Stage s);
Stage parse_stage(std::string_view name);
// prep, labels, features, models, models/tune, metrics, metrics/benchmark,
// explanations, report under paths.out.
std::filesystem::path stage_dir(const RunConfig& cfg, Stage s);

// Expected hash of a stage's artifacts under this config and the current
// input files.
std::string stage_hash(const RunConfig& cfg, Stage s);

// A library error annotated with the stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause) : Error(cause.code(), cause.message()), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Reads upstream artifacts (refusing on hash mismatch), writes this stage's
// artifacts and manifest. Throws StageError.
Manifest run_stage(const RunConfig& cfg, Stage s, std::ostream& log);

}  // namespace tlab::pipeline
