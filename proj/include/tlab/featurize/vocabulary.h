#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tlab/textprep/types.h"

namespace tlab::featurize {

// Token <-> dense index table. Index order: descending corpus count, ties
// broken lexicographically.
class Vocabulary {
 public:
  // Throws EmptyCorpus on an empty corpus, or when no token reaches
  // min_count and allow_empty is false.
  static Vocabulary build(std::span<const textprep::CleanDocument> corpus, std::size_t min_count,
                          bool allow_empty = false);

  std::size_t size() const { return tokens_.size(); }
  std::size_t total_docs() const { return total_docs_; }
  std::optional<std::size_t> index(std::string_view token) const;
  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::size_t count(std::size_t i) const { return counts_.at(i); }
  std::size_t document_frequency(std::size_t i) const { return doc_freq_.at(i); }
  std::size_t document_frequency(std::string_view token) const;

  // Fraction of the tokens of `tokens` that are in the vocabulary (1 when empty).
  double coverage(std::span<const std::string> tokens) const;

  // Plain text: "# total_docs=N" then token<TAB>count<TAB>df per index.
  std::string serialize() const;
  static Vocabulary parse(std::string_view text);

 private:
  std::vector<std::string> tokens_;
  std::vector<std::size_t> counts_;
  std::vector<std::size_t> doc_freq_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t total_docs_ = 0;
};

}  // namespace tlab::featurize
