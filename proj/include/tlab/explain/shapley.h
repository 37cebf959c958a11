#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlab/explain/attribution.h"
#include "tlab/explain/classifier.h"

namespace tlab::explain {

inline constexpr std::size_t kMaxExactFeatures = 12;

// Memoized f(S) for one target class. Bit i of the key is feature i; a
// feature may stand for several tokens (grouped mode).
class CoalitionEvaluator {
 public:
  CoalitionEvaluator(ProbabilityFn fn, std::vector<std::vector<std::size_t>> features, std::size_t token_count,
                     std::size_t target);

  std::size_t feature_count() const { return features_.size(); }
  double value(std::uint64_t subset);
  // Fills the whole table, fanning model calls out over worker threads.
  void evaluate_all();
  std::size_t model_calls() const { return calls_; }

 private:
  double compute(std::uint64_t subset) const;

  ProbabilityFn fn_;
  std::vector<std::vector<std::size_t>> features_;
  std::size_t tokens_;
  std::size_t target_;
  std::vector<double> cache_;
  std::vector<std::uint8_t> known_;
  std::size_t calls_ = 0;
};

// Exact enumeration over features. Returns phi per feature; `base` gets f(empty)
// and `full` f(all).
std::vector<double> exact_shapley_values(CoalitionEvaluator& eval, double* base, double* full);

struct ShapleyOptions {
  std::optional<std::size_t> target_class;  // default: predicted class
  std::string doc_id;
  std::string mask_policy;
};

// Throws TooManyTokens above kMaxExactFeatures tokens, ModelFailure when fn
// throws or returns no usable probabilities.
Attribution shapley_exact(const ProbabilityFn& fn, const std::vector<std::string>& tokens,
                          const ShapleyOptions& opts = {});

// Exact Shapley over groups, each group value split evenly across its
// members. Throws BadPartition unless the groups cover every token once and
// number at most kMaxExactFeatures.
Attribution shapley_grouped(const ProbabilityFn& fn, const std::vector<std::string>& tokens,
                            const std::vector<std::vector<std::size_t>>& partition, const ShapleyOptions& opts = {});

// Contiguous groups of near-equal size, at most kMaxExactFeatures of them.
std::vector<std::vector<std::size_t>> contiguous_partition(std::size_t tokens, std::size_t groups);

}  // namespace tlab::explain
