#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlab/explain/attribution.h"
#include "tlab/explain/classifier.h"

namespace tlab::explain {

struct LimeConfig {
  std::size_t n_samples = 1000;
  double kernel_width = 0.75;
  double ridge_lambda = 1e-3;
  std::uint64_t seed = 1;
  std::optional<std::size_t> target_class;
};

// Cosine distance between the all-present instance and z.
double presence_distance(std::span<const std::uint8_t> z);

struct WeightedFit {
  double intercept = 0.0;
  std::vector<double> coef;
  double r2 = 0.0;
};

// Ridge on weighted samples; the intercept is not penalized. Throws
// DegenerateSamples when every row of z is identical.
WeightedFit weighted_ridge(const std::vector<std::vector<std::uint8_t>>& z, std::span<const double> y,
                           std::span<const double> weights, double lambda);

// samples[0] is the original instance; the rest are uniform random subsets.
std::vector<std::vector<std::uint8_t>> lime_samples(std::size_t features, std::size_t n, std::uint64_t seed);

// Throws DegenerateSamples, ModelFailure, InvalidConfig (kernel_width <= 0
// or fewer than 2 samples, empty doc).
Attribution lime_explain(const ProbabilityFn& fn, const std::vector<std::string>& tokens, const LimeConfig& cfg,
                         const std::string& doc_id = "", const std::string& mask_policy = "");

}  // namespace tlab::explain
