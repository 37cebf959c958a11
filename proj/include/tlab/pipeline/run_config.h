#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "tlab/explain/lime.h"
#include "tlab/featurize/word2vec.h"
#include "tlab/lexlabel/scoring.h"
#include "tlab/models/config.h"
#include "tlab/models/train.h"
#include "tlab/models/tune.h"

namespace tlab::pipeline {

// Stream numbers for derive_seed(master, stream).
enum SeedStream : std::uint64_t {
  kSplitStream = 1,
  kWord2VecStream = 2,
  kModelInitStream = 3,
  kShuffleStream = 4,
  kTuneStream = 5,
  kBenchmarkStream = 6,
  kLimeStream = 7,
};

// Feature families a model can consume.
enum class Embedding { kTrainable, kWord2Vec, kWord2VecSum, kWord2VecAvg, kExternal, kBow, kTfidf };
std::string_view embedding_name(Embedding e);
Embedding parse_embedding(std::string_view name);

struct GridEntry {
  models::Arch arch = models::Arch::kTrabsa;
  Embedding embedding = Embedding::kTrainable;
  models::Ablation ablation = models::Ablation::kNone;
  std::string label() const;
};

struct RunConfig {
  std::uint64_t seed = 1;
  struct {
    std::string corpus, assets, lexicon, external_embeddings, out;
  } paths;
  struct {
    std::size_t min_token_len = 2;
    std::vector<std::string> steps;
  } prep;
  struct {
    std::string source = "lexicon";  // or "gold"
    lexlabel::ScoreConfig score;
  } label;
  struct {
    std::size_t min_count = 1;
    std::array<double, 3> ratios{0.8, 0.1, 0.1};
    bool stratified = true;
    featurize::Word2VecConfig word2vec;
  } feature;
  struct {
    models::ModelConfig config;  // vocab_size, embedding_source and seed are filled in at run time
    Embedding embedding = Embedding::kTrainable;
    models::Ablation ablation = models::Ablation::kNone;
  } model;
  models::TrainConfig train;
  struct {
    std::size_t k = 10;
    bool stratified = true;
    double alpha = 0.05;
    std::size_t max_epochs = 10;
    bool parallel = true;
    std::vector<GridEntry> grid;
  } eval;
  struct {
    std::string method = "shapley";
    std::size_t max_tokens = 10;
    std::size_t docs = 5;
    std::string doc_id;
    std::string mask_policy = "zero_embedding";
    explain::LimeConfig lime;
    std::size_t top_k = 20;
  } explain;
  struct {
    models::SearchSpace space;
    std::size_t max_epochs = 5;
  } tune;

  // Canonical section JSON, used for hashing and manifests.
  nlohmann::ordered_json section(std::string_view name) const;
  nlohmann::ordered_json to_json() const;
};

// Every key with its default value.
nlohmann::ordered_json default_run_config_json();

// Merges `user` over the defaults. Unknown keys and type changes throw
// InvalidConfig, as does any invalid stage setting.
RunConfig parse_run_config(const nlohmann::json& user);
RunConfig load_run_config(const std::filesystem::path& path);

// Sets a dotted key ("train.max_epochs") in a user config document. The
// value is read as JSON when it parses, else as a string.
void apply_override(nlohmann::json& user, std::string_view dotted_key, std::string_view value);

}  // namespace tlab::pipeline
