#include "tlab/featurize/vectorize.h"

#include <cmath>
#include <map>

namespace tlab::featurize {

std::vector<double> SparseVector::to_dense() const {
  std::vector<double> out(dims, 0.0);
  for (const auto& [i, v] : entries) out[i] = v;
  return out;
}

SparseVector bow_vectorize(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::map<std::size_t, double> counts;
  for (const auto& token : tokens) {
    if (const auto i = vocab.index(token)) counts[*i] += 1.0;
  }
  SparseVector out;
  out.dims = vocab.size();
  out.entries.assign(counts.begin(), counts.end());
  return out;
}

SparseVector tfidf_transform(std::span<const std::string> tokens, const Vocabulary& vocab) {
  SparseVector out = bow_vectorize(tokens, vocab);
  const double n = static_cast<double>(vocab.total_docs());
  double norm2 = 0.0;
  for (auto& [i, v] : out.entries) {
    const double df = static_cast<double>(vocab.document_frequency(i));
    v *= std::log((1.0 + n) / (1.0 + df)) + 1.0;
    norm2 += v * v;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& entry : out.entries) entry.second *= inv;
  }
  return out;
}

}  // namespace tlab::featurize
