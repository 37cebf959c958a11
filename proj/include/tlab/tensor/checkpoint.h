#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tlab/tensor/layers.h"

namespace tlab::tensor {

// Parameter values rounded to float32, in parameter order.
using Snapshot = std::vector<std::vector<float>>;

Snapshot take_snapshot(const ParameterSet& params);
void restore_snapshot(ParameterSet& params, const Snapshot& snap);

// Writes <stem>.json {version, model_config_hash, params:[{name, shape}]} and
// <stem>.bin with the little-endian float32 arrays in manifest order.
void save_checkpoint(const std::filesystem::path& stem, const ParameterSet& params, const std::string& config_hash);
void save_checkpoint(const std::filesystem::path& stem, const ParameterSet& params, const Snapshot& snap,
                     const std::string& config_hash);

// Loads into existing parameters. Throws HashMismatch when the stored config
// hash differs, ShapeMismatch when names or shapes differ, MalformedFile on
// a damaged manifest or blob.
void load_checkpoint(const std::filesystem::path& stem, ParameterSet& params, const std::string& config_hash);

}  // namespace tlab::tensor
