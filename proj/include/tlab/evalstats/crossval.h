#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tlab/evalstats/metrics.h"

namespace tlab::evalstats {

struct Fold {
  std::vector<std::size_t> train;  // ascending
  std::vector<std::size_t> test;   // ascending
};

// Stratified dealing goes class by class in ascending label order, continuing
// the round-robin position across classes so fold sizes differ by at most one.
std::vector<Fold> kfold_split(std::span<const int> labels, std::size_t k, bool stratified, std::uint64_t seed);

// Fits on the given training indices and returns a predictor over dataset
// indices. The seed is unique per fold.
using Predictor = std::function<int(std::size_t)>;
using FoldTrainer = std::function<Predictor(std::span<const std::size_t> train, std::uint64_t seed)>;

struct FoldOutcome {
  MetricsReport report;
  double train_seconds = 0.0;
  double inference_seconds = 0.0;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single value
};

MeanStd mean_std(std::span<const double> values);

struct CrossValResult {
  std::vector<Fold> folds;
  std::vector<FoldOutcome> outcomes;
  MeanStd macro_precision, macro_recall, macro_f1, accuracy;
  MeanStd train_seconds, inference_seconds;

  std::vector<double> fold_values(double MetricsReport::*field) const;
};

struct CrossValOptions {
  std::size_t k = 10;
  bool stratified = true;
  std::uint64_t seed = 1;
  bool parallel = false;
};

CrossValResult cross_validate(const FoldTrainer& trainer, std::span<const int> labels,
                              std::span<const int> classes, const CrossValOptions& opts);

struct BenchmarkRow {
  std::string model;
  std::string embedding;
  CrossValResult result;
};

// model,embedding,<metric>_mean,<metric>_std for macro P/R/F1 and accuracy,
// then mean fold training and inference seconds.
std::string benchmark_csv(std::span<const BenchmarkRow> rows, bool with_timing = true);

}  // namespace tlab::evalstats
