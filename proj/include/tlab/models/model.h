#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tlab/common/rng.h"
#include "tlab/models/config.h"
#include "tlab/tensor/layers.h"

namespace tlab::models {

// One document as the network sees it. Trainable source: `ids` (table rows,
// 0 reserved). External sources: `values` holds rows x embedding_dim floats.
// mask[r] == 0 marks padding or a hidden token.
struct Example {
  std::string id;
  std::vector<std::size_t> ids;
  std::vector<float> values;
  std::size_t rows = 0;
  std::vector<std::uint8_t> mask;
  std::size_t target = 0;  // class index
};

class Model {
 public:
  // Throws InvalidConfig.
  explicit Model(ModelConfig config);

  const ModelConfig& config() const { return config_; }
  const Blueprint& plan() const { return plan_; }
  tensor::ParameterSet& parameters() { return params_; }
  const tensor::ParameterSet& parameters() const { return params_; }

  // [1, classes] probabilities. Training mode applies dropout from `rng`.
  // Throws ShapeMismatch when the example does not fit the embedding source.
  tensor::Tensor forward(const Example& x, bool training, Rng* rng) const;
  // Eval mode, no graph.
  std::vector<double> predict(const Example& x) const;
  std::size_t predict_class(const Example& x) const;

  // Width of the recurrent block output (H per direction, doubled when
  // bidirectional); 0 without one.
  std::size_t recurrent_output_width() const;
  // Documented closed-form count for this config.
  std::size_t expected_parameter_count() const { return closed_form_parameter_count(config_); }
  static std::size_t closed_form_parameter_count(const ModelConfig& config);

 private:
  tensor::Tensor embed(const Example& x, std::size_t rows) const;

  ModelConfig config_;
  Blueprint plan_;
  tensor::ParameterSet params_;
  tensor::Tensor table_;
  std::vector<tensor::LstmParams> fwd_, bwd_;
  tensor::AttentionParams attention_;
  tensor::ConvParams conv_;
  std::vector<tensor::DenseParams> dense_;
  tensor::DenseParams head_;
};

// Token ids for the trainable path: vocabulary index + 1, OOV skipped,
// truncated to max_len.
template <typename Vocab>
std::vector<std::size_t> encode_ids(std::span<const std::string> tokens, const Vocab& vocab, std::size_t max_len) {
  std::vector<std::size_t> ids;
  for (const auto& t : tokens) {
    if (ids.size() >= max_len) break;
    if (auto i = vocab.index(t)) ids.push_back(*i + 1);
  }
  return ids;
}

}  // namespace tlab::models
