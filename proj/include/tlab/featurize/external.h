#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace tlab::featurize {

enum class EmbeddingMode { kPooled, kSequence };

std::string_view embedding_mode_name(EmbeddingMode mode);

inline constexpr std::size_t kMaxSequenceLength = 256;

// One document's imported features. Pooled: rows == 1. Sequence: rows ==
// max_len after truncation/padding, mask[r] == 1 for real tokens.
struct ExternalDoc {
  std::string id;
  std::size_t rows = 0;
  std::size_t source_tokens = 0;
  std::vector<float> values;  // rows x dim, row-major
  std::vector<std::uint8_t> mask;
};

struct ExternalEmbeddingSet {
  std::size_t dim = 0;
  EmbeddingMode mode = EmbeddingMode::kPooled;
  std::vector<ExternalDoc> docs;

  const ExternalDoc* find(std::string_view id) const;
  void reindex();

 private:
  std::unordered_map<std::string, std::size_t> by_id_;
};

// One header line {"dim","count","mode","version"} then id<TAB>base64(LE
// float32) per document. Throws MalformedFile or DimensionMismatch.
ExternalEmbeddingSet parse_external_embeddings(std::string_view text,
                                               std::size_t max_len = kMaxSequenceLength);
ExternalEmbeddingSet import_external_embeddings(const std::filesystem::path& path,
                                                std::size_t max_len = kMaxSequenceLength);

// Writes only the unmasked rows of each document.
std::string format_external_embeddings(const ExternalEmbeddingSet& set);
void export_external_embeddings(const std::filesystem::path& path, const ExternalEmbeddingSet& set);

}  // namespace tlab::featurize
