#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

namespace tlab::evalstats {

// Rows are true labels, columns predictions, both in `classes` order.
struct ConfusionMatrix {
  std::vector<int> classes;
  std::vector<std::vector<std::size_t>> counts;

  std::size_t size() const { return classes.size(); }
  std::size_t total() const;
  std::size_t row_sum(std::size_t i) const;
  std::size_t column_sum(std::size_t j) const;
  // one-vs-rest reading for class i
  std::size_t true_positives(std::size_t i) const { return counts[i][i]; }
  std::size_t false_positives(std::size_t i) const { return column_sum(i) - counts[i][i]; }
  std::size_t false_negatives(std::size_t i) const { return row_sum(i) - counts[i][i]; }
  std::size_t true_negatives(std::size_t i) const;
};

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::span<const int> classes);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // set when TP+FP or TP+FN is zero; the affected value is reported as 0
  bool precision_undefined = false;
  bool recall_undefined = false;
};

struct MetricsReport {
  std::vector<int> classes;
  std::vector<ClassMetrics> per_class;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::size_t n_classes = 0;
  std::size_t support = 0;
};

MetricsReport metrics(const ConfusionMatrix& cm);

nlohmann::ordered_json to_json(const ConfusionMatrix& cm);
nlohmann::ordered_json to_json(const MetricsReport& report);

}  // namespace tlab::evalstats
