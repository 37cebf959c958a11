#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "tlab/common/error.h"
#include "tlab/models/config.h"
#include "tlab/models/model.h"
#include "tlab/models/naive_bayes.h"
#include "tlab/models/train.h"
#include "tlab/models/tune.h"
#include "tlab/tensor/checkpoint.h"

using namespace tlab;
using namespace tlab::models;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

ModelConfig trainable_desk(Arch arch = Arch::kTrabsa) {
  ModelConfig c = desk_config(arch);
  c.vocab_size = 20;
  return c;
}

Example ids_example(std::vector<std::size_t> ids, std::size_t target = 0) {
  Example e;
  e.ids = std::move(ids);
  e.target = target;
  return e;
}

std::vector<Example> toy_set(std::uint64_t seed, std::size_t per_class) {
  Rng rng(seed);
  std::vector<Example> out;
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<std::size_t> ids;
      const auto len = 3 + rng.below(4);
      for (std::uint64_t k = 0; k < len; ++k) ids.push_back(1 + c * 3 + rng.below(3));
      out.push_back(ids_example(ids, c));
    }
  return out;
}

std::set<std::string> names(const Model& m) {
  std::set<std::string> out;
  for (const auto& p : m.parameters().items()) out.insert(p.name);
  return out;
}

featurize::SparseVector sv(std::size_t dims, std::vector<std::pair<std::size_t, double>> e) {
  featurize::SparseVector v;
  v.dims = dims;
  v.entries = std::move(e);
  return v;
}

}  // namespace

TEST(Labels, ClassOrder) {
  EXPECT_EQ(label_to_class(-1), 0u);
  EXPECT_EQ(label_to_class(0), 1u);
  EXPECT_EQ(label_to_class(1), 2u);
  EXPECT_EQ(class_to_label(2), 1);
  EXPECT_EQ(one_hot(1), (std::vector<double>{0, 0, 1}));
  EXPECT_EQ(code_of([] { one_hot(2); }), ErrorCode::kUnknownLabel);
}

TEST(Config, JsonRoundTripAndValidate) {
  ModelConfig c = trainable_desk();
  c.dense_units = {7, 5};
  c.gap_reshape_mode = GapMode::kPooled;
  const auto back = model_config_from_json(nlohmann::json::parse(to_json(c).dump()));
  EXPECT_EQ(to_json(back), to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  c.dropout_rate = 1.0;
  EXPECT_EQ(code_of([&] { validate(c); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(code_of([] { parse_arch("transformer"); }), ErrorCode::kInvalidConfig);
  ModelConfig v = desk_config();
  EXPECT_EQ(code_of([&] { Model m(v); }), ErrorCode::kInvalidConfig);  // vocab missing
}

TEST(Model, DeskShapeAndSum) {
  Model m(trainable_desk());
  auto out = m.forward(ids_example({1, 2, 3, 4}), false, nullptr);
  EXPECT_EQ(out.shape(), (tensor::Shape{1, 3}));
  double s = 0.0;
  for (double p : out.data()) s += p;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST(Model, ZeroHeadIsUniform) {
  for (Arch arch : {Arch::kTrabsa, Arch::kSingleDense, Arch::kThreeDense, Arch::kBilstmDense, Arch::kBilstmCnn}) {
    ModelConfig c = trainable_desk(arch);
    c.zero_init_head = true;
    Model m(c);
    for (double p : m.predict(ids_example({3, 1, 4, 1, 5}))) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15) << arch_name(arch);
  }
}

TEST(Model, ParameterCountMatchesClosedForm) {
  for (Arch arch : {Arch::kTrabsa, Arch::kSingleDense, Arch::kThreeDense, Arch::kBilstmDense, Arch::kBilstmCnn}) {
    for (auto gap : {GapMode::kSequence, GapMode::kPooled}) {
      ModelConfig c = trainable_desk(arch);
      c.gap_reshape_mode = gap;
      Model m(c);
      EXPECT_EQ(m.parameters().scalar_count(), m.expected_parameter_count()) << arch_name(arch);
      for (Ablation a : kAllAblations) {
        if (arch != Arch::kTrabsa) continue;
        Model ab(apply_ablation(c, a));
        EXPECT_EQ(ab.parameters().scalar_count(), ab.expected_parameter_count()) << ablation_name(a);
      }
    }
  }
}

TEST(Model, DeskHandCount) {
  // embed 20x32, BiLSTM 16/dir over 32, attention 32, dense 32/16/8, head 256*8 -> 3
  ModelConfig c = trainable_desk();
  const std::size_t lstm = 2 * (4 * 16 * (32 + 16) + 4 * 16);
  const std::size_t expected = 20 * 32 + lstm + 3 * 32 * 32 + (32 * 32 + 32) + (32 * 16 + 16) + (16 * 8 + 8) +
                               (256 * 8 * 3 + 3);
  EXPECT_EQ(Model(c).parameters().scalar_count(), expected);
}

TEST(Model, UnidirectionalAblationWidth) {
  ModelConfig c = trainable_desk();
  EXPECT_EQ(Model(c).recurrent_output_width(), 32u);
  EXPECT_EQ(Model(apply_ablation(c, Ablation::kUnidirectional)).recurrent_output_width(), 16u);
}

TEST(Model, AblationsRemoveOnlyNamedBlocks) {
  ModelConfig c = trainable_desk();
  const auto full = names(Model(c));
  auto without = [&](const std::set<std::string>& s, const std::string& prefix) {
    std::set<std::string> out;
    for (const auto& n : s)
      if (n.rfind(prefix, 0) != 0) out.insert(n);
    return out;
  };
  const auto no_attn = names(Model(apply_ablation(c, Ablation::kNoAttention)));
  EXPECT_EQ(no_attn, without(full, "attention/"));
  const auto no_dense = names(Model(apply_ablation(c, Ablation::kNoDense)));
  EXPECT_EQ(no_dense, without(full, "dense"));
  const auto no_ba = names(Model(apply_ablation(c, Ablation::kNoBilstmAttention)));
  EXPECT_EQ(no_ba, without(without(full, "attention/"), "lstm"));
  const auto no_bad = names(Model(apply_ablation(c, Ablation::kNoBilstmAttentionDense)));
  EXPECT_EQ(no_bad, without(without(without(full, "attention/"), "lstm"), "dense"));
  EXPECT_EQ(names(Model(apply_ablation(c, Ablation::kNoDropout))), full);
  EXPECT_EQ(names(Model(apply_ablation(c, Ablation::kUnidirectional))), without(full, "lstm0/backward"));
  EXPECT_EQ(apply_ablation(c, Ablation::kNoDropout).dropout_rate, 0.0);
}

TEST(Model, TrailingPaddingIsInert) {
  ModelConfig c = desk_config();
  c.embedding_source = EmbeddingSource::kExternalSequence;
  c.embedding_dim = 4;
  c.max_len = 10;
  Model m(c);
  Rng rng(3);
  Example shortx;
  shortx.rows = 3;
  for (int i = 0; i < 12; ++i) shortx.values.push_back(static_cast<float>(rng.uniform(-1, 1)));
  Example padded = shortx;
  padded.rows = 10;
  padded.values.resize(40, 0.0f);
  padded.mask.assign(10, 0);
  std::fill(padded.mask.begin(), padded.mask.begin() + 3, 1);
  EXPECT_EQ(m.predict(shortx), m.predict(padded));

  Example bad = shortx;
  bad.values.pop_back();
  EXPECT_EQ(code_of([&] { m.predict(bad); }), ErrorCode::kShapeMismatch);

  // fully hidden input falls back to the head bias (zero at init)
  Example hidden = padded;
  std::fill(hidden.mask.begin(), hidden.mask.end(), 0);
  for (double p : m.predict(hidden)) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Model, AllMaskedFallsBackToHeadBiasForEveryArch) {
  for (Arch arch : {Arch::kTrabsa, Arch::kSingleDense, Arch::kThreeDense, Arch::kBilstmDense, Arch::kBilstmCnn}) {
    for (auto gap : {GapMode::kSequence, GapMode::kPooled}) {
      ModelConfig c = desk_config(arch);
      c.embedding_source = EmbeddingSource::kExternalSequence;
      c.embedding_dim = 7;
      c.gap_reshape_mode = gap;
      Model m(c);
      const std::vector<double> bias{0.5, -1.0, 0.25};
      for (auto& p : m.parameters().items())
        if (p.name == "head/bias") p.value.mutable_data() = bias;
      Example x;
      x.rows = 3;
      x.values.assign(21, 0.3f);
      x.mask.assign(3, 0);
      const double z = std::exp(0.5) + std::exp(-1.0) + std::exp(0.25);
      const auto p = m.predict(x);
      for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(p[k], std::exp(bias[k]) / z, 1e-15) << arch_name(arch);
    }
  }
}

TEST(Model, PooledModeIsLengthOneSequence) {
  ModelConfig c = trainable_desk();
  c.gap_reshape_mode = GapMode::kPooled;
  Model m(c);
  EXPECT_TRUE(m.plan().pool_before);
  EXPECT_EQ(m.plan().head_rows, 1u);
  // order of tokens is irrelevant once pooled
  const auto a = m.predict(ids_example({1, 2, 3}));
  const auto b = m.predict(ids_example({3, 1, 2}));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
}

TEST(Model, PredictIsPure) {
  ModelConfig c = trainable_desk();
  c.dropout_rate = 0.4;
  Model m(c);
  const auto x = ids_example({5, 6, 7});
  EXPECT_EQ(m.predict(x), m.predict(x));
}

TEST(FullScale, PublishedDimensions) {
  ModelConfig c = full_scale_config();
  EXPECT_EQ(c.bilstm_units, (std::vector<std::size_t>{512}));
  EXPECT_EQ(c.dense_units, (std::vector<std::size_t>{512, 256, 128}));
  EXPECT_EQ(c.dropout_rate, 0.05);
  EXPECT_EQ(c.max_len, 256u);
  EXPECT_EQ(c.classes, 3u);
  // hand count over 768-wide token embeddings
  const std::size_t lstm = 2 * (4 * 512 * (768 + 512) + 4 * 512);
  EXPECT_EQ(lstm, 5246976u);
  const std::size_t attn = 3 * 1024 * 1024;
  const std::size_t dense = (1024 * 512 + 512) + (512 * 256 + 256) + (256 * 128 + 128);
  const std::size_t head = 256 * 128 * 3 + 3;
  EXPECT_EQ(Model::closed_form_parameter_count(c), lstm + attn + dense + head);
}

TEST(EarlyStopping, StopsAfterPatience) {
  EarlyStopping s(5);
  const double losses[] = {5, 4, 3, 3.5, 4, 5, 6, 7, 8, 9};
  std::size_t stopped = 0;
  for (std::size_t e = 1; e <= 10; ++e) {
    s.update(e, losses[e - 1]);
    if (s.should_stop()) {
      stopped = e;
      break;
    }
  }
  EXPECT_EQ(stopped, 8u);
  EXPECT_EQ(s.best_epoch(), 3u);
}

TEST(Train, DeterministicAndRestoresBest) {
  const auto data = toy_set(2, 6);
  const auto val = toy_set(9, 2);
  ModelConfig c = trainable_desk();
  TrainConfig tc;
  tc.max_epochs = 12;
  tc.lr0 = 1e-2;
  tc.early_stop_patience = 3;
  const auto dir = std::filesystem::temp_directory_path() / "tlab_train_test";
  std::filesystem::remove_all(dir);
  tc.checkpoint_stem = dir / "best";

  Model a(c);
  const auto ra = train(a, data, val, tc);
  Model b(c);
  const auto rb = train(b, data, val, tc);
  ASSERT_EQ(ra.history.size(), rb.history.size());
  for (std::size_t i = 0; i < ra.history.size(); ++i) {
    EXPECT_EQ(ra.history[i].train_loss, rb.history[i].train_loss);
    EXPECT_EQ(ra.history[i].val_loss, rb.history[i].val_loss);
    EXPECT_EQ(ra.history[i].lr, rb.history[i].lr);
  }
  EXPECT_EQ(history_csv(ra.history), history_csv(rb.history));

  double best = 1e300;
  std::size_t best_epoch = 0;
  for (const auto& r : ra.history)
    if (r.val_loss < best) {
      best = r.val_loss;
      best_epoch = r.epoch;
    }
  EXPECT_EQ(ra.best_epoch, best_epoch);

  Model fresh(c);
  tensor::load_checkpoint(tc.checkpoint_stem, fresh.parameters(), config_hash(c));
  EXPECT_EQ(tensor::take_snapshot(fresh.parameters()), tensor::take_snapshot(a.parameters()));
  for (std::size_t i = 0; i < a.parameters().size(); ++i) {
    EXPECT_EQ(fresh.parameters().items()[i].value.data(), a.parameters().items()[i].value.data());
  }
  std::filesystem::remove_all(dir);
}

TEST(Train, LrFollowsSchedule) {
  const auto data = toy_set(4, 2);
  Model m(trainable_desk());
  TrainConfig tc;
  tc.max_epochs = 4;
  tc.early_stop_patience = 10;
  const auto r = train(m, data, data, tc);
  for (const auto& h : r.history) EXPECT_DOUBLE_EQ(h.lr, 4e-5 * std::exp(-0.1 * static_cast<double>(h.epoch - 1)));
}

TEST(Train, Errors) {
  Model m(trainable_desk());
  const auto data = toy_set(1, 1);
  EXPECT_EQ(code_of([&] { train(m, {}, data, TrainConfig{}); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { train(m, data, {}, TrainConfig{}); }), ErrorCode::kEmptyDataset);
}

TEST(NaiveBayes, SingleClass) {
  std::vector<featurize::SparseVector> docs{sv(3, {{0, 1}}), sv(3, {{1, 2}})};
  std::vector<std::size_t> y{2, 2};
  auto m = train_naive_bayes(docs, y, 1.0);
  EXPECT_EQ(predict_nb(m, sv(3, {{0, 5}})), 2u);
  EXPECT_EQ(predict_nb(m, sv(3, {})), 2u);
  EXPECT_EQ(predict_proba_nb(m, sv(3, {{2, 1}}))[2], 1.0);
}

TEST(NaiveBayes, SymmetricToy) {
  std::vector<featurize::SparseVector> docs{sv(2, {{0, 3}, {1, 1}}), sv(2, {{0, 1}, {1, 3}})};
  std::vector<std::size_t> y{0, 2};
  auto m = train_naive_bayes(docs, y, 1.0);
  EXPECT_EQ(predict_nb(m, sv(2, {{0, 2}})), 0u);
  EXPECT_EQ(predict_nb(m, sv(2, {{1, 2}})), 2u);
  auto p = predict_proba_nb(m, sv(2, {{0, 1}, {1, 1}}));
  EXPECT_NEAR(p[0], p[2], 1e-15);
}

TEST(NaiveBayes, HandOracle) {
  // vocab {a, b, c}; classes 0 and 1 (index), alpha 1
  std::vector<featurize::SparseVector> docs{sv(3, {{0, 2}, {1, 1}}), sv(3, {{0, 1}}), sv(3, {{1, 1}, {2, 2}}),
                                            sv(3, {{2, 1}})};
  std::vector<std::size_t> y{0, 0, 1, 1};
  auto m = train_naive_bayes(docs, y, 1.0);
  // class 0 counts a=3 b=1 c=0 (total 4); class 1 a=0 b=1 c=3 (total 4)
  const auto x = sv(3, {{0, 1}, {2, 1}});
  const double j0 = std::log(0.5) + std::log(4.0 / 7.0) + std::log(1.0 / 7.0);
  const double j1 = std::log(0.5) + std::log(1.0 / 7.0) + std::log(4.0 / 7.0);
  auto joint = nb_joint_log_likelihood(m, x);
  EXPECT_NEAR(joint[0], j0, 1e-12);
  EXPECT_NEAR(joint[1], j1, 1e-12);
  EXPECT_TRUE(std::isinf(joint[2]));
  const auto x2 = sv(3, {{0, 2}});
  EXPECT_NEAR(nb_joint_log_likelihood(m, x2)[0], std::log(0.5) + 2 * std::log(4.0 / 7.0), 1e-12);
  EXPECT_EQ(predict_nb(m, x2), 0u);
  EXPECT_EQ(code_of([] { train_naive_bayes({}, {}, 1.0); }), ErrorCode::kEmptyDataset);
  EXPECT_EQ(code_of([&] { train_naive_bayes(docs, y, 0.0); }), ErrorCode::kInvalidConfig);
}

TEST(Tune, BoundsAndLogUniform) {
  SearchSpace s;
  Rng rng(5);
  std::size_t low_decade = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto t = sample_trial(s, rng);
    EXPECT_GE(t.bilstm_units, 128u);
    EXPECT_LE(t.bilstm_units, 512u);
    EXPECT_GE(t.dense1, 128u);
    EXPECT_LE(t.dense1, 768u);
    EXPECT_GE(t.dense2, 64u);
    EXPECT_LE(t.dense2, 512u);
    EXPECT_GE(t.dense3, 32u);
    EXPECT_LE(t.dense3, 256u);
    EXPECT_GE(t.dropout, 0.1);
    EXPECT_LE(t.dropout, 0.5);
    EXPECT_GE(t.lr, 1e-5);
    EXPECT_LE(t.lr, 1e-3);
    low_decade += t.lr < 1e-4 ? 1 : 0;
  }
  // each decade holds half the mass under a log-uniform draw
  EXPECT_NEAR(static_cast<double>(low_decade) / 2000.0, 0.5, 0.05);
}

TEST(Tune, SingleTrialAndReproducible) {
  SearchSpace s;
  s.bilstm_units = {2, 6};
  s.dense1 = {4, 8};
  s.dense2 = {2, 4};
  s.dense3 = {2, 3};
  s.trials = 1;
  const auto data = toy_set(3, 3);
  TrainConfig tc;
  tc.max_epochs = 2;
  auto r = tune_random_search(s, trainable_desk(), tc, data, data, 17);
  ASSERT_EQ(r.trials.size(), 1u);
  EXPECT_EQ(r.best_index, 0u);

  s.trials = 4;
  auto a = tune_random_search(s, trainable_desk(), tc, data, data, 17);
  auto b = tune_random_search(s, trainable_desk(), tc, data, data, 17);
  EXPECT_EQ(trial_log_csv(a.trials), trial_log_csv(b.trials));
  for (const auto& t : a.trials) EXPECT_GE(t.val_loss, a.trials[a.best_index].val_loss);
  EXPECT_EQ(a.best_config.bilstm_units[0], a.trials[a.best_index].sample.bilstm_units);
}
