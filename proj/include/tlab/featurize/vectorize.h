#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tlab/featurize/vocabulary.h"

namespace tlab::featurize {

// Indices strictly increasing and < dims; no explicit zeros.
struct SparseVector {
  std::size_t dims = 0;
  std::vector<std::pair<std::size_t, double>> entries;

  std::vector<double> to_dense() const;
  bool empty() const { return entries.empty(); }
};

// Raw in-vocabulary token counts; OOV tokens are skipped.
SparseVector bow_vectorize(std::span<const std::string> tokens, const Vocabulary& vocab);

// tf * (ln((1 + N) / (1 + df)) + 1), then L2-normalized.
SparseVector tfidf_transform(std::span<const std::string> tokens, const Vocabulary& vocab);

}  // namespace tlab::featurize
