#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::featurize {

struct Word2VecConfig {
  std::size_t dim = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr0 = 0.025;
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
  // >1 trains shards concurrently with unsynchronised updates; results then
  // depend on scheduling and are not reproducible.
  std::size_t threads = 1;
};

struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
  std::size_t window = 0;
  std::size_t negatives = 0;
  std::size_t epochs = 0;
  bool deterministic = true;

  const std::vector<double>* find(std::string_view token) const;
};

// Skip-gram with negative sampling. Throws EmptyCorpus when there are no
// tokens to train on and InvalidConfig for dim == 0.
EmbeddingTable train_word2vec(std::span<const textprep::CleanDocument> corpus,
                              const Word2VecConfig& config);

enum class PoolMode { kSum, kAverage };

// Zero vector when no token is in the table.
std::vector<double> doc_vector(std::span<const std::string> tokens, const EmbeddingTable& table,
                               PoolMode mode);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace tlab::featurize
