#include "tlab/models/naive_bayes.h"

#include <cmath>
#include <limits>

#include "tlab/common/error.h"

namespace tlab::models {

NaiveBayesModel train_naive_bayes(std::span<const featurize::SparseVector> docs, std::span<const std::size_t> classes,
                                  double alpha, std::size_t class_count) {
  if (docs.empty()) throw Error(ErrorCode::kEmptyDataset, "naive bayes: no training documents");
  if (docs.size() != classes.size()) throw Error(ErrorCode::kLengthMismatch, "naive bayes: docs and labels differ in length");
  if (!(alpha > 0.0)) throw Error(ErrorCode::kInvalidConfig, "naive bayes: alpha must be > 0");
  NaiveBayesModel m;
  m.classes = class_count;
  m.alpha = alpha;
  m.vocab = docs[0].dims;
  std::vector<double> doc_count(class_count, 0.0), token_total(class_count, 0.0);
  std::vector<std::vector<double>> counts(class_count, std::vector<double>(m.vocab, 0.0));
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::size_t c = classes[i];
    if (c >= class_count) throw Error(ErrorCode::kUnknownLabel, "naive bayes: class " + std::to_string(c));
    if (docs[i].dims != m.vocab) throw Error(ErrorCode::kLengthMismatch, "naive bayes: documents differ in width");
    doc_count[c] += 1.0;
    for (const auto& [j, v] : docs[i].entries) {
      counts[c][j] += v;
      token_total[c] += v;
    }
  }
  const double n = static_cast<double>(docs.size());
  const double v = static_cast<double>(m.vocab);
  m.present.resize(class_count);
  m.log_prior.resize(class_count);
  m.log_likelihood.assign(class_count, std::vector<double>(m.vocab, 0.0));
  for (std::size_t c = 0; c < class_count; ++c) {
    m.present[c] = doc_count[c] > 0.0;
    m.log_prior[c] = m.present[c] ? std::log(doc_count[c] / n) : -std::numeric_limits<double>::infinity();
    const double denom = token_total[c] + alpha * v;
    for (std::size_t j = 0; j < m.vocab; ++j) m.log_likelihood[c][j] = std::log((counts[c][j] + alpha) / denom);
  }
  return m;
}

std::vector<double> nb_joint_log_likelihood(const NaiveBayesModel& m, const featurize::SparseVector& doc) {
  if (doc.dims != m.vocab) throw Error(ErrorCode::kLengthMismatch, "naive bayes: document width differs from model");
  std::vector<double> out(m.classes);
  for (std::size_t c = 0; c < m.classes; ++c) {
    if (!m.present[c]) {
      out[c] = -std::numeric_limits<double>::infinity();
      continue;
    }
    double s = m.log_prior[c];
    for (const auto& [j, v] : doc.entries) s += v * m.log_likelihood[c][j];
    out[c] = s;
  }
  return out;
}

std::vector<double> predict_proba_nb(const NaiveBayesModel& m, const featurize::SparseVector& doc) {
  auto joint = nb_joint_log_likelihood(m, doc);
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : joint) mx = std::max(mx, x);
  double z = 0.0;
  for (double& x : joint) {
    x = std::isinf(x) ? 0.0 : std::exp(x - mx);
    z += x;
  }
  for (double& x : joint) x /= z;
  return joint;
}

std::size_t predict_nb(const NaiveBayesModel& m, const featurize::SparseVector& doc) {
  const auto joint = nb_joint_log_likelihood(m, doc);
  std::size_t best = 0;
  for (std::size_t c = 1; c < joint.size(); ++c)
    if (joint[c] > joint[best]) best = c;
  return best;
}

}  // namespace tlab::models
