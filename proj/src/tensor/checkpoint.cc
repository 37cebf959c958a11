#include "tlab/tensor/checkpoint.h"

#include <json.hpp>

#include "tlab/common/base64.h"
#include "tlab/common/error.h"
#include "tlab/common/io.h"

namespace tlab::tensor {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& stem, const char* ext) {
  std::filesystem::path p = stem;
  p += ext;
  return p;
}

}  // namespace

Snapshot take_snapshot(const ParameterSet& params) {
  Snapshot snap;
  for (const auto& p : params.items()) {
    std::vector<float> v(p.value.data().begin(), p.value.data().end());
    snap.push_back(std::move(v));
  }
  return snap;
}

void restore_snapshot(ParameterSet& params, const Snapshot& snap) {
  if (snap.size() != params.size()) throw Error(ErrorCode::kShapeMismatch, "snapshot parameter count differs");
  auto items = params.items();
  for (std::size_t i = 0; i < snap.size(); ++i) {
    auto& data = items[i].value.mutable_data();
    if (data.size() != snap[i].size()) {
      throw Error(ErrorCode::kShapeMismatch, "snapshot size differs for " + items[i].name);
    }
    for (std::size_t j = 0; j < data.size(); ++j) data[j] = static_cast<double>(snap[i][j]);
  }
}

void save_checkpoint(const std::filesystem::path& stem, const ParameterSet& params, const std::string& config_hash) {
  save_checkpoint(stem, params, take_snapshot(params), config_hash);
}

void save_checkpoint(const std::filesystem::path& stem, const ParameterSet& params, const Snapshot& snap,
                     const std::string& config_hash) {
  if (snap.size() != params.size()) throw Error(ErrorCode::kShapeMismatch, "snapshot parameter count differs");
  nlohmann::ordered_json manifest;
  manifest["version"] = 1;
  manifest["model_config_hash"] = config_hash;
  manifest["params"] = nlohmann::ordered_json::array();
  std::string blob;
  for (std::size_t i = 0; i < snap.size(); ++i) {
    const auto& p = params.items()[i];
    manifest["params"].push_back({{"name", p.name}, {"shape", p.value.shape()}});
    const auto bytes = base64::pack_f32_le(snap[i]);
    blob.append(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  }
  io::write_file(with_suffix(stem, ".json"), manifest.dump(2) + "\n");
  io::write_file(with_suffix(stem, ".bin"), blob);
}

void load_checkpoint(const std::filesystem::path& stem, ParameterSet& params, const std::string& config_hash) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(io::read_file(with_suffix(stem, ".json")));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("checkpoint manifest: ") + e.what());
  }
  const std::string blob = io::read_file(with_suffix(stem, ".bin"));
  try {
    if (manifest.at("version").get<int>() != 1) throw Error(ErrorCode::kMalformedFile, "checkpoint: unsupported version");
    const auto stored = manifest.at("model_config_hash").get<std::string>();
    if (stored != config_hash) {
      throw Error(ErrorCode::kHashMismatch, "checkpoint built for config " + stored + ", expected " + config_hash);
    }
    const auto& entries = manifest.at("params");
    if (entries.size() != params.size()) {
      throw Error(ErrorCode::kShapeMismatch, "checkpoint has " + std::to_string(entries.size()) +
                                                 " parameters, model has " + std::to_string(params.size()));
    }
    std::size_t expected_bytes = 0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto& p = params.items()[i];
      const auto name = entries[i].at("name").get<std::string>();
      const auto shape = entries[i].at("shape").get<Shape>();
      if (name != p.name || shape != p.value.shape()) {
        throw Error(ErrorCode::kShapeMismatch, "checkpoint parameter " + name + shape_string(shape) + " vs model " +
                                                   p.name + shape_string(p.value.shape()));
      }
      expected_bytes += 4 * numel(shape);
    }
    if (blob.size() != expected_bytes) {
      throw Error(ErrorCode::kMalformedFile, "checkpoint blob has " + std::to_string(blob.size()) + " bytes, expected " +
                                                 std::to_string(expected_bytes));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, std::string("checkpoint manifest: ") + e.what());
  }
  Snapshot snap;
  std::size_t offset = 0;
  for (const auto& p : params.items()) {
    const std::size_t bytes = 4 * p.value.size();
    std::span<const std::uint8_t> chunk(reinterpret_cast<const std::uint8_t*>(blob.data()) + offset, bytes);
    snap.push_back(base64::unpack_f32_le(chunk));
    offset += bytes;
  }
  restore_snapshot(params, snap);
}

}  // namespace tlab::tensor
