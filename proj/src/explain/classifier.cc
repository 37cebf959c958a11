#include "tlab/explain/classifier.h"

#include <algorithm>

#include "tlab/common/error.h"
#include "tlab/featurize/vectorize.h"

namespace tlab::explain {

std::string_view mask_policy_name(MaskPolicy p) {
  return p == MaskPolicy::kRemoval ? "removal" : "zero_embedding";
}

MaskPolicy parse_mask_policy(std::string_view name) {
  if (name == "removal") return MaskPolicy::kRemoval;
  if (name == "zero_embedding") return MaskPolicy::kZeroEmbedding;
  throw Error(ErrorCode::kInvalidConfig, "unknown mask policy '" + std::string(name) + "'");
}

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

ProbabilityFn neural_probability(const models::Model& model, models::Example x, MaskPolicy policy) {
  const bool by_id = model.config().embedding_source == models::EmbeddingSource::kTrainable;
  const std::size_t rows = by_id ? x.ids.size() : x.rows;
  if (x.mask.empty()) x.mask.assign(rows, 1);
  return [&model, x = std::move(x), policy, by_id, rows](std::span<const std::uint8_t> present) {
    if (present.size() != rows)
      throw Error(ErrorCode::kShapeMismatch, "coalition covers " + std::to_string(present.size()) + " of " +
                                                 std::to_string(rows) + " rows");
    models::Example y;
    y.id = x.id;
    y.target = x.target;
    if (policy == MaskPolicy::kZeroEmbedding) {
      y = x;
      for (std::size_t r = 0; r < rows; ++r) y.mask[r] = x.mask[r] && present[r];
      return model.predict(y);
    }
    const std::size_t width = by_id ? 0 : model.config().embedding_dim;
    for (std::size_t r = 0; r < rows; ++r) {
      if (!present[r]) continue;
      if (by_id) y.ids.push_back(x.ids[r]);
      else y.values.insert(y.values.end(), x.values.begin() + r * width, x.values.begin() + (r + 1) * width);
      y.mask.push_back(x.mask[r]);
    }
    y.rows = y.mask.size();
    return model.predict(y);
  };
}

ProbabilityFn naive_bayes_probability(const models::NaiveBayesModel& model, const featurize::Vocabulary& vocab,
                                      std::vector<std::string> tokens) {
  return [&model, &vocab, tokens = std::move(tokens)](std::span<const std::uint8_t> present) {
    if (present.size() != tokens.size()) throw Error(ErrorCode::kShapeMismatch, "coalition size differs from doc");
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < tokens.size(); ++i)
      if (present[i]) kept.push_back(tokens[i]);
    return models::predict_proba_nb(model, featurize::bow_vectorize(kept, vocab));
  };
}

}  // namespace tlab::explain
