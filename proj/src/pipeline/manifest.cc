#include "tlab/pipeline/manifest.h"

#include "tlab/common/error.h"
#include "tlab/common/hash.h"
#include "tlab/common/io.h"

namespace tlab::pipeline {

nlohmann::ordered_json to_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["stage"] = m.stage;
  j["hash"] = m.hash;
  j["upstream"] = m.upstream;
  j["config"] = m.config;
  j["files"] = m.files;
  j["summary"] = m.summary;
  return j;
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
  io::write_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

Manifest read_manifest(const std::filesystem::path& dir) {
  const auto path = dir / "manifest.json";
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIo, "missing " + path.string());
  try {
    const auto j = nlohmann::ordered_json::parse(io::read_file(path));
    Manifest m;
    m.stage = j.at("stage");
    m.hash = j.at("hash");
    m.upstream = j.at("upstream").get<std::map<std::string, std::string>>();
    m.config = j.at("config");
    m.files = j.at("files").get<std::map<std::string, std::string>>();
    m.summary = j.at("summary");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": " + e.what());
  }
}

void write_artifact(const std::filesystem::path& dir, Manifest& m, const std::string& name, const std::string& content) {
  io::write_file(dir / name, content);
  m.files[name] = fingerprint(content);
}

void verify_files(const std::filesystem::path& dir, const Manifest& m) {
  for (const auto& [name, hash] : m.files) {
    const auto path = dir / name;
    if (!std::filesystem::exists(path))
      throw Error(ErrorCode::kHashMismatch, m.stage + " artifact " + path.string() + " is missing");
    if (fingerprint(io::read_file(path)) != hash)
      throw Error(ErrorCode::kHashMismatch, m.stage + " artifact " + path.string() + " changed since it was written");
  }
}

}  // namespace tlab::pipeline
