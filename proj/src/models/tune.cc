#include "tlab/models/tune.h"

#include <cmath>

#include "tlab/common/error.h"
#include "tlab/common/io.h"
#include "tlab/common/parallel.h"

namespace tlab::models {

void validate(const SearchSpace& s) {
  auto check = [](const IntRange& r, const char* name) {
    if (r.lo < 1 || r.lo > r.hi) throw Error(ErrorCode::kInvalidConfig, std::string("search range ") + name + " is empty");
  };
  check(s.bilstm_units, "bilstm_units");
  check(s.dense1, "dense1");
  check(s.dense2, "dense2");
  check(s.dense3, "dense3");
  if (!(s.dropout_lo >= 0.0 && s.dropout_lo <= s.dropout_hi && s.dropout_hi < 1.0)) {
    throw Error(ErrorCode::kInvalidConfig, "dropout range must lie in [0, 1)");
  }
  if (!(s.lr_lo > 0.0 && s.lr_lo <= s.lr_hi)) throw Error(ErrorCode::kInvalidConfig, "lr range must be positive");
  if (s.trials < 1) throw Error(ErrorCode::kInvalidConfig, "trials must be >= 1");
}

TrialSample sample_trial(const SearchSpace& s, Rng& rng) {
  auto pick = [&](const IntRange& r) {
    return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(r.lo), static_cast<std::int64_t>(r.hi)));
  };
  TrialSample t;
  t.bilstm_units = pick(s.bilstm_units);
  t.dense1 = pick(s.dense1);
  t.dense2 = pick(s.dense2);
  t.dense3 = pick(s.dense3);
  t.dropout = rng.uniform(s.dropout_lo, s.dropout_hi);
  t.lr = std::exp(rng.uniform(std::log(s.lr_lo), std::log(s.lr_hi)));
  return t;
}

ModelConfig apply_trial(ModelConfig base, const TrialSample& t) {
  base.bilstm_units = {t.bilstm_units};
  base.dense_units = {t.dense1, t.dense2, t.dense3};
  base.dropout_rate = t.dropout;
  return base;
}

TuneResult tune_random_search(const SearchSpace& space, const ModelConfig& base_model, const TrainConfig& base_train,
                              std::span<const Example> train_set, std::span<const Example> val_set, std::uint64_t seed) {
  validate(space);
  Rng rng(derive_seed(seed, 0));
  TuneResult result;
  result.trials.resize(space.trials);
  for (std::size_t i = 0; i < space.trials; ++i) {
    result.trials[i].index = i;
    result.trials[i].sample = sample_trial(space, rng);
  }
  parallel_for(space.trials, [&](std::size_t i) {
    TrialRecord& rec = result.trials[i];
    ModelConfig mc = apply_trial(base_model, rec.sample);
    mc.seed = derive_seed(seed, 1000 + i);
    TrainConfig tc = base_train;
    tc.lr0 = rec.sample.lr;
    tc.shuffle_seed = derive_seed(seed, 2000 + i);
    tc.checkpoint_stem.clear();
    Model model(mc);
    const TrainResult tr = train(model, train_set, val_set, tc);
    rec.best_epoch = tr.best_epoch;
    rec.val_loss = tr.best_val_loss;
  });
  for (std::size_t i = 1; i < result.trials.size(); ++i) {
    if (result.trials[i].val_loss < result.trials[result.best_index].val_loss) result.best_index = i;
  }
  const auto& best = result.trials[result.best_index];
  result.best_config = apply_trial(base_model, best.sample);
  result.best_lr = best.sample.lr;
  return result;
}

std::string trial_log_csv(std::span<const TrialRecord> trials) {
  std::string out = "trial,bilstm_units,dense1,dense2,dense3,dropout,lr,best_epoch,val_loss\n";
  for (const auto& t : trials) {
    out += std::to_string(t.index) + ',' + std::to_string(t.sample.bilstm_units) + ',' +
           std::to_string(t.sample.dense1) + ',' + std::to_string(t.sample.dense2) + ',' +
           std::to_string(t.sample.dense3) + ',' + io::format_double(t.sample.dropout) + ',' +
           io::format_double(t.sample.lr) + ',' + std::to_string(t.best_epoch) + ',' + io::format_double(t.val_loss) +
           '\n';
  }
  return out;
}

}  // namespace tlab::models
