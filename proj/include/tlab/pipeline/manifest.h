#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace tlab::pipeline {

// One per stage directory. `hash` fingerprints the stage config, its inputs
// and the upstream hashes; `files` maps each artifact to its content
// fingerprint.
struct Manifest {
  std::string stage;
  std::string hash;
  std::map<std::string, std::string> upstream;
  nlohmann::ordered_json config;
  std::map<std::string, std::string> files;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const Manifest& m);
void write_manifest(const std::filesystem::path& dir, const Manifest& m);
// Throws Io when missing, MalformedFile when unreadable.
Manifest read_manifest(const std::filesystem::path& dir);

// Writes the artifact and records its fingerprint in the manifest.
void write_artifact(const std::filesystem::path& dir, Manifest& m, const std::string& name, const std::string& content);

// HashMismatch when any listed file is missing or its content changed.
void verify_files(const std::filesystem::path& dir, const Manifest& m);

}  // namespace tlab::pipeline
