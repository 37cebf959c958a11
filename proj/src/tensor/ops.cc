#include "tlab/tensor/ops.h"

#include <algorithm>
#include <cmath>

#include "tlab/common/error.h"

namespace tlab::tensor {

namespace {

[[noreturn]] void shape_error(const char* op, const std::string& detail) {
  throw Error(ErrorCode::kShapeMismatch, std::string(op) + ": " + detail);
}

void require_rank2(const char* op, const Tensor& t) {
  if (t.rank() != 2) shape_error(op, "expected rank 2, got " + shape_string(t.shape()));
}

using BackwardFn = std::function<void(Node&)>;

// Builds the result node, checks finiteness and records the backward rule
// only when some input needs a gradient.
Tensor make(const char* op, Shape shape, std::vector<double> data, std::initializer_list<const Tensor*> inputs,
            BackwardFn fn) {
  for (double x : data) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNumericFailure, std::string("non-finite value in ") + op);
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->op = op;
  bool needs = false;
  if (grad_enabled()) {
    for (const Tensor* t : inputs) needs = needs || t->requires_grad();
  }
  if (needs) {
    node->requires_grad = true;
    for (const Tensor* t : inputs) node->parents.push_back(t->shared());
    node->backward = std::move(fn);
  }
  return Tensor(std::move(node));
}

Tensor make_many(const char* op, Shape shape, std::vector<double> data, std::span<const Tensor> inputs,
                 BackwardFn fn) {
  for (double x : data) {
    if (!std::isfinite(x)) throw Error(ErrorCode::kNumericFailure, std::string("non-finite value in ") + op);
  }
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->op = op;
  bool needs = false;
  if (grad_enabled()) {
    for (const Tensor& t : inputs) needs = needs || t.requires_grad();
  }
  if (needs) {
    node->requires_grad = true;
    for (const Tensor& t : inputs) node->parents.push_back(t.shared());
    node->backward = std::move(fn);
  }
  return Tensor(std::move(node));
}

// Gradient sink for parent i, or nullptr when it does not need one.
std::vector<double>* sink(Node& self, std::size_t i) {
  Node* p = self.parents[i].get();
  return p->requires_grad ? &p->grad_buffer() : nullptr;
}

template <typename F, typename D>
Tensor unary(const char* op, const Tensor& a, F f, D dfdx_from_y) {
  std::vector<double> out(a.size());
  const auto& x = a.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(x[i]);
  return make(op, a.shape(), std::move(out), {&a}, [dfdx_from_y](Node& self) {
    auto* g = sink(self, 0);
    const auto& x = self.parents[0]->data;
    for (std::size_t i = 0; i < self.data.size(); ++i) (*g)[i] += self.grad[i] * dfdx_from_y(x[i], self.data[i]);
  });
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2("matmul", a);
  require_rank2("matmul", b);
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) shape_error("matmul", shape_string(a.shape()) + " x " + shape_string(b.shape()));
  std::vector<double> out(m * n, 0.0);
  const auto& x = a.data();
  const auto& y = b.data();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = x[i * k + p];
      if (xv == 0.0) continue;
      const double* yr = &y[p * n];
      double* o = &out[i * n];
      for (std::size_t j = 0; j < n; ++j) o[j] += xv * yr[j];
    }
  }
  return make("matmul", {m, n}, std::move(out), {&a, &b}, [m, k, n](Node& self) {
    const auto& x = self.parents[0]->data;
    const auto& y = self.parents[1]->data;
    const auto& g = self.grad;
    if (auto* ga = sink(self, 0)) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < n; ++j) s += g[i * n + j] * y[p * n + j];
          (*ga)[i * k + p] += s;
        }
    }
    if (auto* gb = sink(self, 1)) {
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double xv = x[i * k + p];
          if (xv == 0.0) continue;
          for (std::size_t j = 0; j < n; ++j) (*gb)[p * n + j] += xv * g[i * n + j];
        }
    }
  });
}

namespace {

// 0: same shape, 1: row broadcast
int broadcast_kind(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() == b.shape()) return 0;
  const bool row = (b.rank() == 1 || (b.rank() == 2 && b.dim(0) == 1)) && a.rank() == 2 && b.size() == a.dim(1);
  if (row) return 1;
  shape_error(op, shape_string(a.shape()) + " vs " + shape_string(b.shape()));
}

Tensor add_sub(const char* op, const Tensor& a, const Tensor& b, double sign) {
  const int kind = broadcast_kind(op, a, b);
  const std::size_t n = b.size();
  std::vector<double> out(a.data());
  const auto& y = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * y[kind ? i % n : i];
  return make(op, a.shape(), std::move(out), {&a, &b}, [kind, n, sign](Node& self) {
    const auto& g = self.grad;
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i];
    if (auto* gb = sink(self, 1))
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[kind ? i % n : i] += sign * g[i];
  });
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) { return add_sub("add", a, b, 1.0); }
Tensor sub(const Tensor& a, const Tensor& b) { return add_sub("sub", a, b, -1.0); }

Tensor mul(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) shape_error("mul", shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.data()[i] * b.data()[i];
  return make("mul", a.shape(), std::move(out), {&a, &b}, [](Node& self) {
    const auto& g = self.grad;
    const auto& x = self.parents[0]->data;
    const auto& y = self.parents[1]->data;
    if (auto* ga = sink(self, 0))
      for (std::size_t i = 0; i < g.size(); ++i) (*ga)[i] += g[i] * y[i];
    if (auto* gb = sink(self, 1))
      for (std::size_t i = 0; i < g.size(); ++i) (*gb)[i] += g[i] * x[i];
  });
}

Tensor scale(const Tensor& a, double factor) {
  std::vector<double> out(a.data());
  for (double& x : out) x *= factor;
  return make("scale", a.shape(), std::move(out), {&a}, [factor](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += factor * self.grad[i];
  });
}

Tensor concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) shape_error("concat", "no inputs");
  if (axis > 1) shape_error("concat", "axis must be 0 or 1");
  for (const auto& p : parts) require_rank2("concat", p);
  const std::size_t other = axis == 0 ? parts[0].dim(1) : parts[0].dim(0);
  std::size_t total = 0;
  std::vector<std::size_t> extent;
  for (const auto& p : parts) {
    if ((axis == 0 ? p.dim(1) : p.dim(0)) != other) {
      shape_error("concat", shape_string(parts[0].shape()) + " vs " + shape_string(p.shape()));
    }
    extent.push_back(p.dim(axis));
    total += p.dim(axis);
  }
  Shape shape = axis == 0 ? Shape{total, other} : Shape{other, total};
  std::vector<double> out;
  out.reserve(numel(shape));
  if (axis == 0) {
    for (const auto& p : parts) out.insert(out.end(), p.data().begin(), p.data().end());
  } else {
    for (std::size_t r = 0; r < other; ++r)
      for (const auto& p : parts) {
        const std::size_t w = p.dim(1);
        out.insert(out.end(), p.data().begin() + r * w, p.data().begin() + (r + 1) * w);
      }
  }
  return make_many("concat", shape, std::move(out), parts, [axis, other, extent, total](Node& self) {
    const auto& g = self.grad;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < extent.size(); ++i) {
      auto* gp = sink(self, i);
      if (gp) {
        if (axis == 0) {
          const std::size_t base = offset * other;
          for (std::size_t j = 0; j < extent[i] * other; ++j) (*gp)[j] += g[base + j];
        } else {
          for (std::size_t r = 0; r < other; ++r)
            for (std::size_t c = 0; c < extent[i]; ++c) (*gp)[r * extent[i] + c] += g[r * total + offset + c];
        }
      }
      offset += extent[i];
    }
  });
}

Tensor slice(const Tensor& a, std::size_t axis, std::size_t begin, std::size_t end) {
  require_rank2("slice", a);
  if (axis > 1 || begin > end || end > a.dim(axis)) {
    shape_error("slice", "range [" + std::to_string(begin) + "," + std::to_string(end) + ") on axis " +
                             std::to_string(axis) + " of " + shape_string(a.shape()));
  }
  const std::size_t rows = a.dim(0), cols = a.dim(1);
  Shape shape = axis == 0 ? Shape{end - begin, cols} : Shape{rows, end - begin};
  std::vector<double> out;
  out.reserve(numel(shape));
  if (axis == 0) {
    out.assign(a.data().begin() + begin * cols, a.data().begin() + end * cols);
  } else {
    for (std::size_t r = 0; r < rows; ++r)
      out.insert(out.end(), a.data().begin() + r * cols + begin, a.data().begin() + r * cols + end);
  }
  return make("slice", shape, std::move(out), {&a}, [axis, begin, end, rows, cols](Node& self) {
    auto* g = sink(self, 0);
    const auto& s = self.grad;
    if (axis == 0) {
      for (std::size_t j = 0; j < s.size(); ++j) (*g)[begin * cols + j] += s[j];
    } else {
      const std::size_t w = end - begin;
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < w; ++c) (*g)[r * cols + begin + c] += s[r * w + c];
    }
  });
}

Tensor reshape(const Tensor& a, Shape shape) {
  if (numel(shape) != a.size()) shape_error("reshape", shape_string(a.shape()) + " -> " + shape_string(shape));
  return make("reshape", std::move(shape), a.data(), {&a}, [](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t i = 0; i < self.grad.size(); ++i) (*g)[i] += self.grad[i];
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2("transpose", a);
  const std::size_t m = a.dim(0), n = a.dim(1);
  std::vector<double> out(m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) out[j * m + i] = a.data()[i * n + j];
  return make("transpose", {n, m}, std::move(out), {&a}, [m, n](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) (*g)[i * n + j] += self.grad[j * m + i];
  });
}

Tensor reduce_sum(const Tensor& a) {
  double s = 0.0;
  for (double x : a.data()) s += x;
  return make("reduce_sum", {1}, {s}, {&a}, [](Node& self) {
    auto* g = sink(self, 0);
    for (double& x : *g) x += self.grad[0];
  });
}

Tensor reduce_mean(const Tensor& a) {
  if (a.size() == 0) shape_error("reduce_mean", "empty tensor");
  double s = 0.0;
  for (double x : a.data()) s += x;
  const double n = static_cast<double>(a.size());
  return make("reduce_mean", {1}, {s / n}, {&a}, [n](Node& self) {
    auto* g = sink(self, 0);
    for (double& x : *g) x += self.grad[0] / n;
  });
}

Tensor relu(const Tensor& a) {
  return unary("relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
               [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor tanh(const Tensor& a) {
  return unary("tanh", a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      "sigmoid", a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

namespace {

Tensor softmax_impl(const char* op, const Tensor& a, std::span<const std::uint8_t> column_mask) {
  if (a.rank() != 1 && a.rank() != 2) shape_error(op, "expected rank 1 or 2");
  const std::size_t n = a.shape().back();
  const std::size_t rows = a.size() / std::max<std::size_t>(n, 1);
  const bool masked = !column_mask.empty();
  if (masked && column_mask.size() != n) {
    shape_error(op, "mask of " + std::to_string(column_mask.size()) + " for " + std::to_string(n) + " columns");
  }
  std::vector<std::uint8_t> open(n, 1);
  if (masked) {
    std::copy(column_mask.begin(), column_mask.end(), open.begin());
    if (std::none_of(open.begin(), open.end(), [](std::uint8_t m) { return m != 0; })) {
      throw Error(ErrorCode::kAllMasked, std::string(op) + ": every column is masked");
    }
  }
  std::vector<double> out(a.size(), 0.0);
  const auto& x = a.data();
  for (std::size_t r = 0; r < rows; ++r) {
    double mx = -INFINITY;
    for (std::size_t j = 0; j < n; ++j)
      if (open[j]) mx = std::max(mx, x[r * n + j]);
    double z = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!open[j]) continue;
      out[r * n + j] = std::exp(x[r * n + j] - mx);
      z += out[r * n + j];
    }
    for (std::size_t j = 0; j < n; ++j) out[r * n + j] /= z;
  }
  return make(op, a.shape(), std::move(out), {&a}, [rows, n](Node& self) {
    auto* g = sink(self, 0);
    const auto& y = self.data;
    const auto& s = self.grad;
    for (std::size_t r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += s[r * n + j] * y[r * n + j];
      for (std::size_t j = 0; j < n; ++j) (*g)[r * n + j] += y[r * n + j] * (s[r * n + j] - dot);
    }
  });
}

}  // namespace

Tensor softmax(const Tensor& a) { return softmax_impl("softmax", a, {}); }

Tensor masked_softmax(const Tensor& a, std::span<const std::uint8_t> column_mask) {
  if (column_mask.empty()) throw Error(ErrorCode::kAllMasked, "masked_softmax: empty mask");
  return softmax_impl("masked_softmax", a, column_mask);
}

Tensor gather_rows(const Tensor& table, std::span<const std::size_t> rows) {
  require_rank2("gather_rows", table);
  const std::size_t v = table.dim(0), d = table.dim(1);
  std::vector<double> out;
  out.reserve(rows.size() * d);
  for (std::size_t r : rows) {
    if (r >= v) shape_error("gather_rows", "row " + std::to_string(r) + " of " + std::to_string(v));
    out.insert(out.end(), table.data().begin() + r * d, table.data().begin() + (r + 1) * d);
  }
  std::vector<std::size_t> idx(rows.begin(), rows.end());
  return make("gather_rows", {idx.size(), d}, std::move(out), {&table}, [idx, d](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < d; ++j) (*g)[idx[i] * d + j] += self.grad[i * d + j];
  });
}

Tensor mask_rows(const Tensor& a, std::span<const std::uint8_t> mask) {
  require_rank2("mask_rows", a);
  if (mask.size() != a.dim(0)) {
    shape_error("mask_rows", "mask of " + std::to_string(mask.size()) + " for " + shape_string(a.shape()));
  }
  const std::size_t d = a.dim(1);
  std::vector<std::uint8_t> m(mask.begin(), mask.end());
  std::vector<double> out(a.data());
  for (std::size_t r = 0; r < m.size(); ++r)
    if (!m[r]) std::fill(out.begin() + r * d, out.begin() + (r + 1) * d, 0.0);
  return make("mask_rows", a.shape(), std::move(out), {&a}, [m, d](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (m[r])
        for (std::size_t j = 0; j < d; ++j) (*g)[r * d + j] += self.grad[r * d + j];
  });
}

Tensor masked_mean_rows(const Tensor& a, std::span<const std::uint8_t> mask) {
  require_rank2("global_average_pool", a);
  const std::size_t t = a.dim(0), d = a.dim(1);
  std::vector<std::uint8_t> m(t, 1);
  if (!mask.empty()) {
    if (mask.size() != t) shape_error("global_average_pool", "mask length differs from sequence length");
    std::copy(mask.begin(), mask.end(), m.begin());
  }
  const auto count = static_cast<double>(std::count_if(m.begin(), m.end(), [](std::uint8_t v) { return v != 0; }));
  if (count == 0.0) throw Error(ErrorCode::kAllMasked, "global_average_pool: no unmasked step");
  std::vector<double> out(d, 0.0);
  for (std::size_t r = 0; r < t; ++r)
    if (m[r])
      for (std::size_t j = 0; j < d; ++j) out[j] += a.data()[r * d + j];
  for (double& x : out) x /= count;
  return make("global_average_pool", {1, d}, std::move(out), {&a}, [m, d, count](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t r = 0; r < m.size(); ++r)
      if (m[r])
        for (std::size_t j = 0; j < d; ++j) (*g)[r * d + j] += self.grad[j] / count;
  });
}

Tensor unfold_same(const Tensor& a, std::size_t kernel) {
  require_rank2("conv1d", a);
  if (kernel == 0) shape_error("conv1d", "kernel size 0");
  const std::size_t t = a.dim(0), d = a.dim(1);
  const std::ptrdiff_t left = static_cast<std::ptrdiff_t>((kernel - 1) / 2);
  const std::size_t w = kernel * d;
  std::vector<double> out(t * w, 0.0);
  for (std::size_t r = 0; r < t; ++r)
    for (std::size_t k = 0; k < kernel; ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(r) - left + static_cast<std::ptrdiff_t>(k);
      if (src < 0 || src >= static_cast<std::ptrdiff_t>(t)) continue;
      std::copy_n(a.data().begin() + src * static_cast<std::ptrdiff_t>(d), d, out.begin() + r * w + k * d);
    }
  return make("conv1d", {t, w}, std::move(out), {&a}, [t, d, kernel, left, w](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t k = 0; k < kernel; ++k) {
        const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(r) - left + static_cast<std::ptrdiff_t>(k);
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(t)) continue;
        for (std::size_t j = 0; j < d; ++j) (*g)[src * d + j] += self.grad[r * w + k * d + j];
      }
  });
}

Tensor dropout(const Tensor& a, double rate, bool training, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorCode::kInvalidRate, "dropout rate " + std::to_string(rate) + " outside [0, 1)");
  }
  if (!training || rate == 0.0) return a;
  const double keep = 1.0 / (1.0 - rate);
  std::vector<double> factor(a.size());
  for (double& f : factor) f = rng.uniform() < rate ? 0.0 : keep;
  std::vector<double> out(a.data());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= factor[i];
  return make("dropout", a.shape(), std::move(out), {&a}, [factor](Node& self) {
    auto* g = sink(self, 0);
    for (std::size_t i = 0; i < factor.size(); ++i) (*g)[i] += factor[i] * self.grad[i];
  });
}

Tensor cross_entropy(const Tensor& probs, const Tensor& targets) {
  if (probs.shape() != targets.shape()) {
    shape_error("cross_entropy", shape_string(probs.shape()) + " vs " + shape_string(targets.shape()));
  }
  const std::size_t c = probs.shape().back();
  const std::size_t rows = probs.size() / std::max<std::size_t>(c, 1);
  if (rows == 0) shape_error("cross_entropy", "empty batch");
  constexpr double kFloor = 1e-12;
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs.data()[i], kFloor, 1.0);
    loss -= targets.data()[i] * std::log(p);
  }
  loss /= static_cast<double>(rows);
  std::vector<double> t(targets.data());
  return make("cross_entropy", {1}, {loss}, {&probs}, [t, rows](Node& self) {
    auto* g = sink(self, 0);
    const auto& p = self.parents[0]->data;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double pi = p[i];
      if (pi < kFloor || pi > 1.0) continue;  // clipped region is flat
      (*g)[i] -= self.grad[0] * t[i] / (pi * static_cast<double>(rows));
    }
  });
}

}  // namespace tlab::tensor
