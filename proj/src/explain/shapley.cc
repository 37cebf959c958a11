#include "tlab/explain/shapley.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>

#include "tlab/common/error.h"
#include "tlab/common/parallel.h"

namespace tlab::explain {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kShapleyExact: return "shapley_exact";
    case Method::kShapleyGrouped: return "shapley_grouped";
    case Method::kLime: return "lime";
  }
  return "?";
}

double Attribution::phi_sum() const {
  double s = 0.0;
  for (double v : phi) s += v;
  return s;
}

double Attribution::efficiency_residual() const { return std::fabs(base_value + phi_sum() - prediction); }

nlohmann::ordered_json to_json(const Attribution& a) {
  nlohmann::ordered_json j;
  j["doc_id"] = a.doc_id;
  j["method"] = method_name(a.method);
  j["target_class"] = a.target_class;
  j["base_value"] = a.base_value;
  j["prediction"] = a.prediction;
  j["mask_policy"] = a.mask_policy;
  if (a.method == Method::kLime) j["r2"] = a.r2;
  auto& toks = j["tokens"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < a.tokens.size(); ++i) toks.push_back({{"text", a.tokens[i]}, {"phi", a.phi[i]}});
  return j;
}

CoalitionEvaluator::CoalitionEvaluator(ProbabilityFn fn, std::vector<std::vector<std::size_t>> features,
                                       std::size_t token_count, std::size_t target)
    : fn_(std::move(fn)), features_(std::move(features)), tokens_(token_count), target_(target) {
  if (features_.size() > kMaxExactFeatures)
    throw Error(ErrorCode::kTooManyTokens, std::to_string(features_.size()) + " features exceed the exact limit of " +
                                               std::to_string(kMaxExactFeatures));
  cache_.assign(std::size_t{1} << features_.size(), 0.0);
  known_.assign(cache_.size(), 0);
}

double CoalitionEvaluator::compute(std::uint64_t subset) const {
  std::vector<std::uint8_t> present(tokens_, 0);
  for (std::size_t f = 0; f < features_.size(); ++f)
    if (subset >> f & 1U)
      for (auto t : features_[f]) present[t] = 1;
  std::vector<double> probs;
  try {
    probs = fn_(present);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kModelFailure, std::string("model evaluation failed: ") + e.what());
  }
  if (probs.size() <= target_ || !std::isfinite(probs[target_]))
    throw Error(ErrorCode::kModelFailure, "model returned no usable probability for class " + std::to_string(target_));
  return probs[target_];
}

double CoalitionEvaluator::value(std::uint64_t subset) {
  if (!known_[subset]) {
    cache_[subset] = compute(subset);
    known_[subset] = 1;
    ++calls_;
  }
  return cache_[subset];
}

void CoalitionEvaluator::evaluate_all() {
  std::vector<std::uint64_t> todo;
  for (std::uint64_t s = 0; s < cache_.size(); ++s)
    if (!known_[s]) todo.push_back(s);
  std::vector<double> out(todo.size());
  parallel_for(todo.size(), [&](std::size_t i) { out[i] = compute(todo[i]); });
  for (std::size_t i = 0; i < todo.size(); ++i) {
    cache_[todo[i]] = out[i];
    known_[todo[i]] = 1;
  }
  calls_ += todo.size();
}

std::vector<double> exact_shapley_values(CoalitionEvaluator& eval, double* base, double* full) {
  const std::size_t n = eval.feature_count();
  eval.evaluate_all();
  // |S|!(n-|S|-1)!/n! = 1 / (n * C(n-1, |S|))
  std::vector<double> weight(n, 0.0);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  std::vector<double> phi(n, 0.0);
  const std::uint64_t all = (std::uint64_t{1} << n) - 1;
  for (std::uint64_t s = 0; s <= all; ++s) {
    const double vs = eval.value(s);
    const auto size = static_cast<std::size_t>(std::popcount(s));
    for (std::size_t i = 0; i < n; ++i)
      if (!(s >> i & 1U)) phi[i] += weight[size] * (eval.value(s | std::uint64_t{1} << i) - vs);
  }
  if (base) *base = eval.value(0);
  if (full) *full = eval.value(all);
  return phi;
}

namespace {

std::size_t resolve_target(const ProbabilityFn& fn, std::size_t tokens, const ShapleyOptions& opts) {
  if (opts.target_class) return *opts.target_class;
  std::vector<std::uint8_t> all(tokens, 1);
  try {
    return argmax(fn(all));
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kModelFailure, std::string("model evaluation failed: ") + e.what());
  }
}

}  // namespace

Attribution shapley_exact(const ProbabilityFn& fn, const std::vector<std::string>& tokens,
                          const ShapleyOptions& opts) {
  if (tokens.size() > kMaxExactFeatures)
    throw Error(ErrorCode::kTooManyTokens, std::to_string(tokens.size()) + " tokens exceed the exact limit of " +
                                               std::to_string(kMaxExactFeatures) + "; use grouped attribution");
  std::vector<std::vector<std::size_t>> singles(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) singles[i] = {i};
  Attribution a;
  a.doc_id = opts.doc_id;
  a.tokens = tokens;
  a.method = Method::kShapleyExact;
  a.mask_policy = opts.mask_policy;
  a.target_class = resolve_target(fn, tokens.size(), opts);
  CoalitionEvaluator eval(fn, std::move(singles), tokens.size(), a.target_class);
  a.phi = exact_shapley_values(eval, &a.base_value, &a.prediction);
  return a;
}

Attribution shapley_grouped(const ProbabilityFn& fn, const std::vector<std::string>& tokens,
                            const std::vector<std::vector<std::size_t>>& partition, const ShapleyOptions& opts) {
  if (partition.size() > kMaxExactFeatures)
    throw Error(ErrorCode::kBadPartition, std::to_string(partition.size()) + " groups exceed the limit of " +
                                              std::to_string(kMaxExactFeatures));
  std::vector<int> seen(tokens.size(), 0);
  for (const auto& g : partition) {
    if (g.empty()) throw Error(ErrorCode::kBadPartition, "partition has an empty group");
    for (auto t : g) {
      if (t >= tokens.size()) throw Error(ErrorCode::kBadPartition, "partition index out of range");
      if (seen[t]++) throw Error(ErrorCode::kBadPartition, "token " + std::to_string(t) + " appears in two groups");
    }
  }
  for (std::size_t t = 0; t < tokens.size(); ++t)
    if (!seen[t]) throw Error(ErrorCode::kBadPartition, "token " + std::to_string(t) + " is in no group");

  Attribution a;
  a.doc_id = opts.doc_id;
  a.tokens = tokens;
  a.method = Method::kShapleyGrouped;
  a.mask_policy = opts.mask_policy;
  a.target_class = resolve_target(fn, tokens.size(), opts);
  CoalitionEvaluator eval(fn, partition, tokens.size(), a.target_class);
  const auto group_phi = exact_shapley_values(eval, &a.base_value, &a.prediction);
  a.phi.assign(tokens.size(), 0.0);
  for (std::size_t g = 0; g < partition.size(); ++g)
    for (auto t : partition[g]) a.phi[t] = group_phi[g] / static_cast<double>(partition[g].size());
  return a;
}

std::vector<std::vector<std::size_t>> contiguous_partition(std::size_t tokens, std::size_t groups) {
  groups = std::min({groups, tokens, kMaxExactFeatures});
  std::vector<std::vector<std::size_t>> out(groups);
  std::size_t t = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = tokens / groups + (g < tokens % groups ? 1 : 0);
    for (std::size_t k = 0; k < size; ++k) out[g].push_back(t++);
  }
  return out;
}

}  // namespace tlab::explain
