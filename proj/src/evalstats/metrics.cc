#include "tlab/evalstats/metrics.h"

#include <algorithm>
#include <string>

#include "tlab/common/error.h"

namespace tlab::evalstats {

std::size_t ConfusionMatrix::total() const {
  std::size_t t = 0;
  for (const auto& row : counts)
    for (auto c : row) t += c;
  return t;
}

std::size_t ConfusionMatrix::row_sum(std::size_t i) const {
  std::size_t t = 0;
  for (auto c : counts[i]) t += c;
  return t;
}

std::size_t ConfusionMatrix::column_sum(std::size_t j) const {
  std::size_t t = 0;
  for (const auto& row : counts) t += row[j];
  return t;
}

std::size_t ConfusionMatrix::true_negatives(std::size_t i) const {
  return total() - row_sum(i) - column_sum(i) + counts[i][i];
}

ConfusionMatrix confusion(std::span<const int> truth, std::span<const int> predicted,
                          std::span<const int> classes) {
  if (truth.size() != predicted.size())
    throw Error(ErrorCode::kLengthMismatch, "confusion: " + std::to_string(truth.size()) + " true labels vs " +
                                                std::to_string(predicted.size()) + " predictions");
  ConfusionMatrix cm;
  cm.classes.assign(classes.begin(), classes.end());
  cm.counts.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  auto position = [&](int label) {
    auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw Error(ErrorCode::kUnknownLabel, "confusion: label " + std::to_string(label));
    return static_cast<std::size_t>(it - classes.begin());
  };
  for (std::size_t k = 0; k < truth.size(); ++k) ++cm.counts[position(truth[k])][position(predicted[k])];
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  const std::size_t total = cm.total();
  if (total == 0 || cm.size() == 0) throw Error(ErrorCode::kEmptyMatrix, "metrics: confusion matrix is empty");
  MetricsReport r;
  r.classes = cm.classes;
  r.n_classes = cm.size();
  r.support = total;
  std::size_t trace = 0;
  for (std::size_t i = 0; i < cm.size(); ++i) {
    ClassMetrics m;
    const double tp = static_cast<double>(cm.true_positives(i));
    const std::size_t predicted = cm.column_sum(i);
    const std::size_t actual = cm.row_sum(i);
    if (predicted == 0) m.precision_undefined = true;
    else m.precision = tp / static_cast<double>(predicted);
    if (actual == 0) m.recall_undefined = true;
    else m.recall = tp / static_cast<double>(actual);
    if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    r.macro_precision += m.precision;
    r.macro_recall += m.recall;
    r.macro_f1 += m.f1;
    trace += cm.counts[i][i];
    r.per_class.push_back(m);
  }
  const double n = static_cast<double>(cm.size());
  r.macro_precision /= n;
  r.macro_recall /= n;
  r.macro_f1 /= n;
  r.accuracy = static_cast<double>(trace) / static_cast<double>(total);
  return r;
}

nlohmann::ordered_json to_json(const ConfusionMatrix& cm) {
  nlohmann::ordered_json j;
  j["classes"] = cm.classes;
  j["counts"] = cm.counts;
  return j;
}

nlohmann::ordered_json to_json(const MetricsReport& r) {
  nlohmann::ordered_json j;
  j["accuracy"] = r.accuracy;
  j["macro_precision"] = r.macro_precision;
  j["macro_recall"] = r.macro_recall;
  j["macro_f1"] = r.macro_f1;
  j["support"] = r.support;
  auto& per = j["per_class"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < r.per_class.size(); ++i) {
    const auto& m = r.per_class[i];
    nlohmann::ordered_json c;
    c["label"] = r.classes[i];
    c["precision"] = m.precision;
    c["recall"] = m.recall;
    c["f1"] = m.f1;
    if (m.precision_undefined || m.recall_undefined) c["degenerate"] = true;
    per.push_back(c);
  }
  return j;
}

}  // namespace tlab::evalstats
