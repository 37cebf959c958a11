#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tlab/common/rng.h"
#include "tlab/tensor/tensor.h"

namespace tlab::tensor {

// All ops throw ShapeMismatch on incompatible shapes and NumericFailure
// (naming the op) when a result contains NaN or Inf.

// [m,k] x [k,n]
Tensor matmul(const Tensor& a, const Tensor& b);
// Same shape, or b of shape [n] / [1,n] broadcast over the rows of a [m,n].
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);

// Rank-2 only. axis 0 stacks rows, axis 1 joins columns.
Tensor concat(std::span<const Tensor> parts, std::size_t axis);
// Half-open range along axis of a rank-2 tensor.
Tensor slice(const Tensor& a, std::size_t axis, std::size_t begin, std::size_t end);
Tensor reshape(const Tensor& a, Shape shape);
Tensor transpose(const Tensor& a);
Tensor reduce_sum(const Tensor& a);
Tensor reduce_mean(const Tensor& a);

Tensor relu(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor sigmoid(const Tensor& a);
// Along the last axis.
Tensor softmax(const Tensor& a);
// Row-wise softmax over the columns whose mask is 1; masked columns get 0.
// Throws AllMasked when no column is open.
Tensor masked_softmax(const Tensor& a, std::span<const std::uint8_t> column_mask);

Tensor gather_rows(const Tensor& table, std::span<const std::size_t> rows);
// Zeroes rows whose mask entry is 0.
Tensor mask_rows(const Tensor& a, std::span<const std::uint8_t> mask);
// Mean of the unmasked rows of [T,D] -> [1,D]. Throws AllMasked.
Tensor masked_mean_rows(const Tensor& a, std::span<const std::uint8_t> mask);
// [T,D] -> [T,k*D]; row t holds rows t-left .. t-left+k-1 with zero padding,
// left = (k-1)/2.
Tensor unfold_same(const Tensor& a, std::size_t kernel);

// Inverted dropout; identity when !training or rate == 0. Throws InvalidRate.
Tensor dropout(const Tensor& a, double rate, bool training, Rng& rng);

// Mean over rows of -sum(target * ln(clip(prob, 1e-12, 1))). Targets are
// treated as constants.
Tensor cross_entropy(const Tensor& probs, const Tensor& targets);

}  // namespace tlab::tensor
