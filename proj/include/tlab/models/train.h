#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlab/models/model.h"
#include "tlab/tensor/checkpoint.h"

namespace tlab::models {

struct TrainConfig {
  std::size_t batch_size = 16;
  std::size_t max_epochs = 50;
  double lr0 = 4e-5;
  double lr_decay_k = 0.1;
  std::size_t early_stop_patience = 5;
  std::uint64_t shuffle_seed = 1;
  // When set, every new best epoch is also written as <stem>.json/.bin.
  std::filesystem::path checkpoint_stem;
  // Stop as soon as training accuracy reaches 1.
  bool stop_at_perfect_train = false;
};

void validate(const TrainConfig& config);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double lr = 0.0;
  double train_loss = 0.0;
  double train_acc = 0.0;
  double val_loss = 0.0;
  double val_acc = 0.0;
  double seconds = 0.0;  // wall clock, not part of the reproducible record
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  double best_val_loss = 0.0;
  bool stopped_early = false;
  tensor::Snapshot best_snapshot;
};

// Tracks the minimum validation loss; a value counts as better only when
// strictly lower.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}
  // Returns true when `loss` is a new best.
  bool update(std::size_t epoch, double loss);
  bool should_stop() const { return since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  std::size_t best_epoch_ = 0;
  double best_loss_ = 0.0;
  std::size_t since_best_ = 0;
  bool seen_ = false;
};

struct EvalSummary {
  double loss = 0.0;
  double accuracy = 0.0;
};

EvalSummary evaluate(const Model& model, std::span<const Example> data);

// Mini-batch Adam at lr_at(epoch - 1). On return the model holds the best
// epoch's float32 checkpoint. Throws EmptyDataset, NumericFailure.
TrainResult train(Model& model, std::span<const Example> train_set, std::span<const Example> val_set,
                  const TrainConfig& config);

// epoch,lr,train_loss,train_acc,val_loss,val_acc[,seconds]
std::string history_csv(std::span<const EpochRecord> history, bool with_timing = false);

}  // namespace tlab::models
