#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tlab/featurize/vectorize.h"

namespace tlab::models {

// Multinomial Naive Bayes over term counts.
struct NaiveBayesModel {
  std::size_t classes = 3;
  std::size_t vocab = 0;
  double alpha = 1.0;
  std::vector<bool> present;  // classes seen in training
  std::vector<double> log_prior;
  std::vector<std::vector<double>> log_likelihood;  // [class][token]
};

// Throws EmptyDataset, LengthMismatch, InvalidConfig (alpha <= 0),
// UnknownLabel (class index >= classes).
NaiveBayesModel train_naive_bayes(std::span<const featurize::SparseVector> docs, std::span<const std::size_t> classes,
                                  double alpha, std::size_t class_count = 3);

// Log prior + sum(count * log likelihood); -inf for unseen classes.
std::vector<double> nb_joint_log_likelihood(const NaiveBayesModel& model, const featurize::SparseVector& doc);
std::vector<double> predict_proba_nb(const NaiveBayesModel& model, const featurize::SparseVector& doc);
// Ties resolve to the lower class index.
std::size_t predict_nb(const NaiveBayesModel& model, const featurize::SparseVector& doc);

}  // namespace tlab::models
