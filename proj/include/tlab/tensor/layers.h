#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlab/tensor/ops.h"
#include "tlab/tensor/tensor.h"

namespace tlab::tensor {

enum class Activation { kLinear, kRelu, kTanh, kSigmoid, kSoftmax };

Tensor activate(const Tensor& x, Activation act);

struct Parameter {
  std::string name;
  Tensor value;
};

// Ordered, uniquely named trainable tensors.
class ParameterSet {
 public:
  // Throws InvalidConfig on a duplicate name.
  Tensor add(std::string name, Shape shape, std::vector<double> values);
  const Parameter* find(std::string_view name) const;
  std::span<Parameter> items() { return items_; }
  std::span<const Parameter> items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  std::size_t scalar_count() const;
  void zero_grad();

 private:
  std::vector<Parameter> items_;
};

// A mask is one byte per sequence row; empty means every row is real.
using Mask = std::span<const std::uint8_t>;

struct DenseParams {
  Tensor weight;  // [in, out]
  Tensor bias;    // [out]
};

// activation(x W + b), applied to every row of x.
Tensor dense(const Tensor& x, const DenseParams& p, Activation act);

// Gate blocks in column order i, f, g, o.
struct LstmParams {
  Tensor input_weight;      // [d, 4H]
  Tensor recurrent_weight;  // [H, 4H]
  Tensor bias;              // [4H]
  std::size_t hidden() const { return recurrent_weight.dim(0); }
};

struct LstmState {
  Tensor h;  // [1, H]
  Tensor c;  // [1, H]
};

LstmState lstm_zero_state(std::size_t hidden);
LstmState lstm_cell(const Tensor& x_t, const LstmState& prev, const LstmParams& p);

// [T, d] -> [T, H]. Masked steps keep the state and emit zeros. Throws
// EmptySequence.
Tensor lstm(const Tensor& seq, Mask mask, const LstmParams& p, bool reverse);
// [T, d] -> [T, 2H], forward half first.
Tensor bilstm(const Tensor& seq, Mask mask, const LstmParams& fwd, const LstmParams& bwd);

struct AttentionParams {
  Tensor query;  // [D, D]
  Tensor key;
  Tensor value;
};

struct AttentionResult {
  Tensor output;   // [T, D]
  Tensor weights;  // [T, T], rows sum to 1 over unmasked keys
};

// Single head, scaled by 1/sqrt(D). Padding keys get zero weight.
AttentionResult self_attention(const Tensor& seq, Mask mask, const AttentionParams& p);

struct ConvParams {
  Tensor weight;  // [k * D, F], block k holds the tap at offset k - (k-1)/2
  Tensor bias;    // [F]
  std::size_t kernel = 1;
};

// Same-padded cross-correlation over time.
Tensor conv1d(const Tensor& seq, const ConvParams& p, Activation act);

// [T, D] -> [1, D] mean over unmasked rows. Throws AllMasked.
Tensor global_average_pool(const Tensor& seq, Mask mask);

}  // namespace tlab::tensor
