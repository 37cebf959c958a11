#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "tlab/common/rng.h"
#include "tlab/models/train.h"

namespace tlab::models {

struct IntRange {
  std::size_t lo = 0;
  std::size_t hi = 0;  // inclusive
};

struct SearchSpace {
  IntRange bilstm_units{128, 512};
  IntRange dense1{128, 768};
  IntRange dense2{64, 512};
  IntRange dense3{32, 256};
  double dropout_lo = 0.1;
  double dropout_hi = 0.5;
  double lr_lo = 1e-5;  // sampled log-uniformly
  double lr_hi = 1e-3;
  std::size_t trials = 10;
};

void validate(const SearchSpace& space);

struct TrialSample {
  std::size_t bilstm_units = 0;
  std::size_t dense1 = 0, dense2 = 0, dense3 = 0;
  double dropout = 0.0;
  double lr = 0.0;
};

TrialSample sample_trial(const SearchSpace& space, Rng& rng);
ModelConfig apply_trial(ModelConfig base, const TrialSample& trial);

struct TrialRecord {
  std::size_t index = 0;
  TrialSample sample;
  std::size_t best_epoch = 0;
  double val_loss = 0.0;
};

struct TuneResult {
  std::vector<TrialRecord> trials;
  std::size_t best_index = 0;
  ModelConfig best_config;
  double best_lr = 0.0;
};

// Trains every sampled trial for base_train.max_epochs and keeps the one with
// the lowest validation loss (earliest trial on ties). Trials run in
// parallel; each has its own seed stream, so the outcome is reproducible.
TuneResult tune_random_search(const SearchSpace& space, const ModelConfig& base_model, const TrainConfig& base_train,
                              std::span<const Example> train_set, std::span<const Example> val_set, std::uint64_t seed);

// trial,bilstm_units,dense1,dense2,dense3,dropout,lr,best_epoch,val_loss
std::string trial_log_csv(std::span<const TrialRecord> trials);

}  // namespace tlab::models
