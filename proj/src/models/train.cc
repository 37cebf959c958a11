#include "tlab/models/train.h"

#include <chrono>
#include <cmath>
#include <numeric>

#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/common/rng.h"
#include "tlab/tensor/optim.h"

namespace tlab::models {

void validate(const TrainConfig& c) {
  if (c.batch_size < 1) throw Error(ErrorCode::kInvalidConfig, "batch_size must be >= 1");
  if (c.early_stop_patience < 1) throw Error(ErrorCode::kInvalidConfig, "early_stop_patience must be >= 1");
  if (c.max_epochs < 1) throw Error(ErrorCode::kInvalidConfig, "max_epochs must be >= 1");
  if (!(c.lr0 > 0.0)) throw Error(ErrorCode::kInvalidConfig, "lr0 must be > 0");
}

bool EarlyStopping::update(std::size_t epoch, double loss) {
  if (!seen_ || loss < best_loss_) {
    seen_ = true;
    best_loss_ = loss;
    best_epoch_ = epoch;
    since_best_ = 0;
    return true;
  }
  ++since_best_;
  return false;
}

EvalSummary evaluate(const Model& model, std::span<const Example> data) {
  if (data.empty()) throw Error(ErrorCode::kEmptyDataset, "nothing to evaluate");
  tensor::NoGradGuard guard;
  double loss = 0.0;
  std::size_t hits = 0;
  for (const auto& x : data) {
    const auto p = model.predict(x);
    loss -= std::log(std::max(p.at(x.target), 1e-12));
    const auto best = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
    hits += best == x.target ? 1 : 0;
  }
  const double n = static_cast<double>(data.size());
  return {loss / n, static_cast<double>(hits) / n};
}

TrainResult train(Model& model, std::span<const Example> train_set, std::span<const Example> val_set,
                  const TrainConfig& config) {
  validate(config);
  if (train_set.empty()) throw Error(ErrorCode::kEmptyDataset, "empty training set");
  if (val_set.empty()) throw Error(ErrorCode::kEmptyDataset, "empty validation set");
  const std::size_t classes = model.config().classes;
  for (const auto& x : train_set) {
    if (x.target >= classes) throw Error(ErrorCode::kUnknownLabel, "target class out of range in " + x.id);
  }

  auto& params = model.parameters();
  const std::string hash = config_hash(model.config());
  tensor::Adam adam({config.lr0});
  const tensor::LrSchedule schedule{config.lr0, config.lr_decay_k};
  Rng shuffle_rng(derive_seed(config.shuffle_seed, 1));
  Rng dropout_rng(derive_seed(config.shuffle_seed, 2));
  EarlyStopping stopper(config.early_stop_patience);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    const auto start = std::chrono::steady_clock::now();
    const double lr = tensor::lr_at(schedule, static_cast<int>(epoch - 1));
    adam.set_lr(lr);
    shuffle_rng.shuffle(std::span<std::size_t>(order));

    for (std::size_t b = 0; b < order.size(); b += config.batch_size) {
      const std::size_t end = std::min(order.size(), b + config.batch_size);
      const double inv = 1.0 / static_cast<double>(end - b);
      params.zero_grad();
      for (std::size_t k = b; k < end; ++k) {
        const Example& x = train_set[order[k]];
        const tensor::Tensor probs = model.forward(x, true, &dropout_rng);
        std::vector<double> target(classes, 0.0);
        target[x.target] = 1.0;
        const tensor::Tensor loss =
            tensor::scale(tensor::cross_entropy(probs, tensor::Tensor::from({1, classes}, target)), inv);
        tensor::backward(loss);
      }
      adam.step(params.items());
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.lr = lr;
    const EvalSummary tr = evaluate(model, train_set);
    const EvalSummary va = evaluate(model, val_set);
    rec.train_loss = tr.loss;
    rec.train_acc = tr.accuracy;
    rec.val_loss = va.loss;
    rec.val_acc = va.accuracy;
    if (!std::isfinite(rec.train_loss) || !std::isfinite(rec.val_loss)) {
      throw Error(ErrorCode::kNumericFailure, "non-finite loss at epoch " + std::to_string(epoch));
    }
    if (stopper.update(epoch, va.loss)) {
      result.best_snapshot = tensor::take_snapshot(params);
      if (!config.checkpoint_stem.empty()) {
        tensor::save_checkpoint(config.checkpoint_stem, params, result.best_snapshot, hash);
      }
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.history.push_back(rec);
    if (stopper.should_stop()) {
      result.stopped_early = epoch < config.max_epochs;
      break;
    }
    if (config.stop_at_perfect_train && rec.train_acc == 1.0) break;
  }
  result.best_epoch = stopper.best_epoch();
  result.best_val_loss = stopper.best_loss();
  tensor::restore_snapshot(params, result.best_snapshot);
  return result;
}

std::string history_csv(std::span<const EpochRecord> history, bool with_timing) {
  std::string out = "epoch,lr,train_loss,train_acc,val_loss,val_acc";
  out += with_timing ? ",seconds\n" : "\n";
  for (const auto& r : history) {
    out += std::to_string(r.epoch) + ',' + io::format_double(r.lr) + ',' + io::format_double(r.train_loss) + ',' +
           io::format_double(r.train_acc) + ',' + io::format_double(r.val_loss) + ',' + io::format_double(r.val_acc);
    if (with_timing) out += ',' + io::format_double(r.seconds);
    out += '\n';
  }
  return out;
}

}  // namespace tlab::models
