#include "tlab/tensor/layers.h"

#include <cmath>

#include "tlab/common/error.h"

namespace tlab::tensor {

Tensor activate(const Tensor& x, Activation act) {
  switch (act) {
    case Activation::kLinear: return x;
    case Activation::kRelu: return relu(x);
    case Activation::kTanh: return tanh(x);
    case Activation::kSigmoid: return sigmoid(x);
    case Activation::kSoftmax: return softmax(x);
  }
  return x;
}

Tensor ParameterSet::add(std::string name, Shape shape, std::vector<double> values) {
  if (find(name)) throw Error(ErrorCode::kInvalidConfig, "duplicate parameter name '" + name + "'");
  Tensor t = Tensor::from(std::move(shape), std::move(values), true);
  items_.push_back({std::move(name), t});
  return t;
}

const Parameter* ParameterSet::find(std::string_view name) const {
  for (const auto& p : items_)
    if (p.name == name) return &p;
  return nullptr;
}

std::size_t ParameterSet::scalar_count() const {
  std::size_t n = 0;
  for (const auto& p : items_) n += p.value.size();
  return n;
}

void ParameterSet::zero_grad() {
  for (auto& p : items_) p.value.zero_grad();
}

Tensor dense(const Tensor& x, const DenseParams& p, Activation act) {
  return activate(add(matmul(x, p.weight), p.bias), act);
}

LstmState lstm_zero_state(std::size_t hidden) {
  return {Tensor::zeros({1, hidden}), Tensor::zeros({1, hidden})};
}

namespace {

// z: [1, 4H] pre-activation including the input projection and bias.
LstmState lstm_from_preactivation(const Tensor& z_input, const LstmState& prev, const LstmParams& p) {
  const std::size_t h = p.hidden();
  const Tensor z = add(z_input, matmul(prev.h, p.recurrent_weight));
  const Tensor i = sigmoid(slice(z, 1, 0, h));
  const Tensor f = sigmoid(slice(z, 1, h, 2 * h));
  const Tensor g = tanh(slice(z, 1, 2 * h, 3 * h));
  const Tensor o = sigmoid(slice(z, 1, 3 * h, 4 * h));
  const Tensor c = add(mul(f, prev.c), mul(i, g));
  return {mul(o, tanh(c)), c};
}

void check_lstm(const LstmParams& p, std::size_t d) {
  const std::size_t h = p.recurrent_weight.dim(0);
  if (p.input_weight.rank() != 2 || p.input_weight.dim(0) != d || p.input_weight.dim(1) != 4 * h ||
      p.recurrent_weight.dim(1) != 4 * h || p.bias.size() != 4 * h) {
    throw Error(ErrorCode::kShapeMismatch, "lstm: parameters " + shape_string(p.input_weight.shape()) + ", " +
                                               shape_string(p.recurrent_weight.shape()) + ", " +
                                               shape_string(p.bias.shape()) + " for input width " +
                                               std::to_string(d));
  }
}

}  // namespace

LstmState lstm_cell(const Tensor& x_t, const LstmState& prev, const LstmParams& p) {
  if (x_t.rank() != 2 || x_t.dim(0) != 1) {
    throw Error(ErrorCode::kShapeMismatch, "lstm_cell: input must be [1, d], got " + shape_string(x_t.shape()));
  }
  check_lstm(p, x_t.dim(1));
  const std::size_t h = p.hidden();
  if (prev.h.shape() != Shape{1, h} || prev.c.shape() != Shape{1, h}) {
    throw Error(ErrorCode::kShapeMismatch, "lstm_cell: state must be [1, " + std::to_string(h) + "]");
  }
  return lstm_from_preactivation(add(matmul(x_t, p.input_weight), p.bias), prev, p);
}

Tensor lstm(const Tensor& seq, Mask mask, const LstmParams& p, bool reverse) {
  if (seq.rank() != 2) throw Error(ErrorCode::kShapeMismatch, "lstm: sequence must be [T, d]");
  const std::size_t t = seq.dim(0);
  if (t == 0) throw Error(ErrorCode::kEmptySequence, "lstm: empty sequence");
  if (!mask.empty() && mask.size() != t) throw Error(ErrorCode::kShapeMismatch, "lstm: mask length differs");
  check_lstm(p, seq.dim(1));
  const std::size_t h = p.hidden();
  const Tensor projected = add(matmul(seq, p.input_weight), p.bias);
  const Tensor zero_row = Tensor::zeros({1, h});
  std::vector<Tensor> out(t);
  LstmState state = lstm_zero_state(h);
  for (std::size_t k = 0; k < t; ++k) {
    const std::size_t step = reverse ? t - 1 - k : k;
    if (!mask.empty() && !mask[step]) {
      out[step] = zero_row;
      continue;
    }
    state = lstm_from_preactivation(slice(projected, 0, step, step + 1), state, p);
    out[step] = state.h;
  }
  return concat(out, 0);
}

Tensor bilstm(const Tensor& seq, Mask mask, const LstmParams& fwd, const LstmParams& bwd) {
  const Tensor parts[2] = {lstm(seq, mask, fwd, false), lstm(seq, mask, bwd, true)};
  return concat(parts, 1);
}

AttentionResult self_attention(const Tensor& seq, Mask mask, const AttentionParams& p) {
  if (seq.rank() != 2) throw Error(ErrorCode::kShapeMismatch, "self_attention: sequence must be [T, D]");
  const std::size_t t = seq.dim(0), d = seq.dim(1);
  for (const Tensor* w : {&p.query, &p.key, &p.value}) {
    if (w->shape() != Shape{d, d}) {
      throw Error(ErrorCode::kShapeMismatch, "self_attention: projection " + shape_string(w->shape()) +
                                                 " for width " + std::to_string(d));
    }
  }
  if (t == 0) throw Error(ErrorCode::kEmptySequence, "self_attention: empty sequence");
  std::vector<std::uint8_t> open(t, 1);
  if (!mask.empty()) {
    if (mask.size() != t) throw Error(ErrorCode::kShapeMismatch, "self_attention: mask length differs");
    open.assign(mask.begin(), mask.end());
  }
  const Tensor q = matmul(seq, p.query);
  const Tensor k = matmul(seq, p.key);
  const Tensor v = matmul(seq, p.value);
  const Tensor scores = scale(matmul(q, transpose(k)), 1.0 / std::sqrt(static_cast<double>(d)));
  const Tensor weights = masked_softmax(scores, open);
  return {matmul(weights, v), weights};
}

Tensor conv1d(const Tensor& seq, const ConvParams& p, Activation act) {
  if (seq.rank() != 2) throw Error(ErrorCode::kShapeMismatch, "conv1d: sequence must be [T, D]");
  if (p.weight.rank() != 2 || p.weight.dim(0) != p.kernel * seq.dim(1) || p.bias.size() != p.weight.dim(1)) {
    throw Error(ErrorCode::kShapeMismatch, "conv1d: weight " + shape_string(p.weight.shape()) + " for kernel " +
                                               std::to_string(p.kernel) + " over width " +
                                               std::to_string(seq.dim(1)));
  }
  return dense(unfold_same(seq, p.kernel), {p.weight, p.bias}, act);
}

Tensor global_average_pool(const Tensor& seq, Mask mask) { return masked_mean_rows(seq, mask); }

}  // namespace tlab::tensor
