#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/featurize/vocabulary.h"
#include "tlab/models/model.h"
#include "tlab/models/naive_bayes.h"

namespace tlab::explain {

// Class probabilities for the explained document with only the features
// where present[i] != 0 kept.
using ProbabilityFn = std::function<std::vector<double>(std::span<const std::uint8_t> present)>;

enum class MaskPolicy {
  kRemoval,        // drop hidden tokens, shorter document
  kZeroEmbedding,  // keep positions, zero row and clear its mask bit
};
std::string_view mask_policy_name(MaskPolicy p);
MaskPolicy parse_mask_policy(std::string_view name);

// Features are the example's rows. The model must outlive the function.
ProbabilityFn neural_probability(const models::Model& model, models::Example x, MaskPolicy policy);

// Features are the document tokens; hidden tokens are removed before counting.
ProbabilityFn naive_bayes_probability(const models::NaiveBayesModel& model, const featurize::Vocabulary& vocab,
                                      std::vector<std::string> tokens);

std::size_t argmax(std::span<const double> values);

}  // namespace tlab::explain
