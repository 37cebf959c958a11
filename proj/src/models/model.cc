#include "tlab/models/model.h"

#include <algorithm>

#include "tlab/common/error.h"
#include "tlab/tensor/init.h"
#include "tlab/tensor/ops.h"

namespace tlab::models {

using tensor::Activation;
using tensor::Shape;
using tensor::Tensor;

namespace {

std::vector<double> lstm_bias(std::size_t h) {
  std::vector<double> b(4 * h, 0.0);
  std::fill(b.begin() + static_cast<std::ptrdiff_t>(h), b.begin() + static_cast<std::ptrdiff_t>(2 * h), 1.0);
  return b;
}

}  // namespace

Model::Model(ModelConfig config) : config_(std::move(config)) {
  validate(config_);
  if (config_.arch == Arch::kNaiveBayes) {
    throw Error(ErrorCode::kInvalidConfig, "naive_bayes is not a neural architecture");
  }
  plan_ = blueprint(config_);
  Rng rng(config_.seed);
  std::size_t width = config_.embedding_dim;

  if (config_.embedding_source == EmbeddingSource::kTrainable) {
    std::vector<double> t(config_.vocab_size * width);
    for (double& x : t) x = rng.normal();
    table_ = params_.add("embedding", {config_.vocab_size, width}, std::move(t));
  }

  const std::size_t dirs = plan_.bidirectional ? 2 : 1;
  for (std::size_t l = 0; l < plan_.recurrent.size(); ++l) {
    const std::size_t h = plan_.recurrent[l];
    auto make = [&](const std::string& prefix) {
      tensor::LstmParams p;
      p.input_weight = params_.add(prefix + "/input_weight", {width, 4 * h}, tensor::glorot_uniform(rng, width, 4 * h));
      p.recurrent_weight = params_.add(prefix + "/recurrent_weight", {h, 4 * h}, tensor::orthogonal(rng, h, 4 * h));
      p.bias = params_.add(prefix + "/bias", {4 * h}, lstm_bias(h));
      return p;
    };
    const std::string base = "lstm" + std::to_string(l);
    fwd_.push_back(make(base + "/forward"));
    if (plan_.bidirectional) bwd_.push_back(make(base + "/backward"));
    width = dirs * h;
  }

  if (plan_.conv) {
    const std::size_t k = config_.conv_kernel, f = config_.conv_filters;
    conv_.kernel = k;
    conv_.weight = params_.add("conv/weight", {k * width, f}, tensor::glorot_uniform(rng, k * width, f));
    conv_.bias = params_.add("conv/bias", {f}, std::vector<double>(f, 0.0));
    width = f;
  }

  if (plan_.attention) {
    attention_.query = params_.add("attention/query", {width, width}, tensor::glorot_uniform(rng, width, width));
    attention_.key = params_.add("attention/key", {width, width}, tensor::glorot_uniform(rng, width, width));
    attention_.value = params_.add("attention/value", {width, width}, tensor::glorot_uniform(rng, width, width));
  }

  for (std::size_t l = 0; l < plan_.dense.size(); ++l) {
    const std::size_t out = plan_.dense[l];
    const std::string base = "dense" + std::to_string(l);
    tensor::DenseParams p;
    p.weight = params_.add(base + "/weight", {width, out}, tensor::glorot_uniform(rng, width, out));
    p.bias = params_.add(base + "/bias", {out}, std::vector<double>(out, 0.0));
    dense_.push_back(p);
    width = out;
  }

  const std::size_t flat = plan_.head_rows * width;
  const std::size_t c = config_.classes;
  head_.weight = params_.add("head/weight", {flat, c},
                             config_.zero_init_head ? std::vector<double>(flat * c, 0.0)
                                                    : tensor::glorot_uniform(rng, flat, c));
  head_.bias = params_.add("head/bias", {c}, std::vector<double>(c, 0.0));
}

Tensor Model::embed(const Example& x, std::size_t rows) const {
  const std::size_t d = config_.embedding_dim;
  if (config_.embedding_source == EmbeddingSource::kTrainable) {
    return tensor::gather_rows(table_, std::span<const std::size_t>(x.ids.data(), rows));
  }
  std::vector<double> v(x.values.begin(), x.values.begin() + static_cast<std::ptrdiff_t>(rows * d));
  return Tensor::from({rows, d}, std::move(v));
}

Tensor Model::forward(const Example& x, bool training, Rng* rng) const {
  const std::size_t d = config_.embedding_dim;
  std::size_t rows = 0;
  if (config_.embedding_source == EmbeddingSource::kTrainable) {
    if (!x.values.empty()) throw Error(ErrorCode::kShapeMismatch, "trainable model given embedding values");
    rows = x.ids.size();
  } else {
    rows = x.rows;
    if (x.values.size() != rows * d) {
      throw Error(ErrorCode::kShapeMismatch, "example " + x.id + " has " + std::to_string(x.values.size()) +
                                                 " values for " + std::to_string(rows) + " rows of width " +
                                                 std::to_string(d));
    }
    if (config_.embedding_source == EmbeddingSource::kExternalPooled && rows != 1) {
      throw Error(ErrorCode::kShapeMismatch, "pooled embedding source expects one row per example");
    }
  }
  if (!x.mask.empty() && x.mask.size() != rows) {
    throw Error(ErrorCode::kShapeMismatch, "example " + x.id + " mask length differs from its rows");
  }
  rows = std::min(rows, config_.max_len);
  std::vector<std::uint8_t> mask(rows, 1);
  if (!x.mask.empty()) std::copy_n(x.mask.begin(), rows, mask.begin());
  // trailing padding carries nothing
  std::size_t live = rows;
  while (live > 0 && !mask[live - 1]) --live;
  mask.resize(live);

  Tensor seq;
  const bool empty = live == 0;
  if (!empty) {
    seq = tensor::mask_rows(embed(x, live), mask);
  }
  if (plan_.pool_before && !empty) {
    seq = tensor::global_average_pool(seq, mask);
    mask.assign(1, 1);
  }
  const bool has_rows = seq.defined();

  if (has_rows) {
    for (std::size_t l = 0; l < fwd_.size(); ++l) {
      seq = plan_.bidirectional ? tensor::bilstm(seq, mask, fwd_[l], bwd_[l]) : tensor::lstm(seq, mask, fwd_[l], false);
    }
    if (plan_.conv) {
      seq = tensor::mask_rows(tensor::conv1d(seq, conv_, Activation::kRelu), mask);
    }
    if (plan_.attention) seq = tensor::self_attention(seq, mask, attention_).output;
  }
  if (plan_.pool_after && has_rows) {
    seq = tensor::global_average_pool(seq, mask);
    mask.assign(1, 1);
  }

  Tensor logits;
  if (seq.defined()) {
    for (std::size_t l = 0; l < dense_.size(); ++l) {
      seq = tensor::dense(seq, dense_[l], Activation::kRelu);
      if (l == 0 && config_.dropout_rate > 0.0 && training) {
        if (!rng) throw Error(ErrorCode::kInvalidConfig, "training forward needs a random source");
        seq = tensor::dropout(seq, config_.dropout_rate, true, *rng);
      }
    }
    if (std::find(mask.begin(), mask.end(), 0) != mask.end()) seq = tensor::mask_rows(seq, mask);
    const std::size_t r = seq.dim(0), w = seq.dim(1);
    const Tensor flat = tensor::reshape(seq, {1, r * w});
    const Tensor weight = r * w == head_.weight.dim(0) ? head_.weight : tensor::slice(head_.weight, 0, 0, r * w);
    logits = tensor::add(tensor::matmul(flat, weight), head_.bias);
  } else {
    logits = tensor::reshape(head_.bias, {1, config_.classes});
  }
  return tensor::softmax(logits);
}

std::vector<double> Model::predict(const Example& x) const {
  tensor::NoGradGuard guard;
  return forward(x, false, nullptr).data();
}

std::size_t Model::predict_class(const Example& x) const {
  const auto p = predict(x);
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::size_t Model::recurrent_output_width() const {
  if (plan_.recurrent.empty()) return 0;
  return plan_.recurrent.back() * (plan_.bidirectional ? 2 : 1);
}

std::size_t Model::closed_form_parameter_count(const ModelConfig& config) {
  const Blueprint b = blueprint(config);
  std::size_t total = 0;
  std::size_t width = config.embedding_dim;
  if (config.embedding_source == EmbeddingSource::kTrainable) total += config.vocab_size * width;
  const std::size_t dirs = b.bidirectional ? 2 : 1;
  for (std::size_t h : b.recurrent) {
    total += dirs * (4 * h * (width + h) + 4 * h);
    width = dirs * h;
  }
  if (b.conv) {
    total += config.conv_kernel * width * config.conv_filters + config.conv_filters;
    width = config.conv_filters;
  }
  if (b.attention) total += 3 * width * width;
  for (std::size_t out : b.dense) {
    total += width * out + out;
    width = out;
  }
  total += b.head_rows * width * config.classes + config.classes;
  return total;
}

}  // namespace tlab::models
