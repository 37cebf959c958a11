#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "../support/layer_cases.h"
#include "tlab/common/error.h"
#include "tlab/tensor/checkpoint.h"
#include "tlab/tensor/init.h"
#include "tlab/tensor/layers.h"
#include "tlab/tensor/ops.h"
#include "tlab/tensor/optim.h"

using namespace tlab;
using namespace tlab::tensor;
using tlab::testing::random_tensor;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kIo;
}

double sigm(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST(GradCheck, AllLayersTenSeeds) {
  for (const auto& c : tlab::testing::layer_gradient_cases()) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      EXPECT_LT(c.run(seed), 1e-4) << c.name << " seed " << seed;
    }
  }
}

TEST(Ops, Examples) {
  auto eye = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  Rng rng(1);
  auto a = random_tensor(rng, {3, 2}, 1.0, false);
  EXPECT_EQ(matmul(eye, a).data(), a.data());
  EXPECT_DOUBLE_EQ(reduce_mean(Tensor::from({2}, {2, 4})).item(), 3.0);
  auto r = reshape(Tensor::from({2, 3}, {1, 2, 3, 4, 5, 6}), {3, 2});
  EXPECT_EQ(r.shape(), (Shape{3, 2}));
  EXPECT_EQ(r.data(), (std::vector<double>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(relu(Tensor::scalar(-2)).item(), 0.0);
  EXPECT_EQ(sigmoid(Tensor::scalar(0)).item(), 0.5);
  auto s = softmax(Tensor::from({3}, {0, 0, 0}));
  for (double x : s.data()) EXPECT_NEAR(x, 1.0 / 3.0, 1e-15);
}

TEST(Ops, ShapeMismatch) {
  auto a = Tensor::zeros({2, 3});
  auto b = Tensor::zeros({2, 3});
  EXPECT_EQ(code_of([&] { matmul(a, b); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { add(a, Tensor::zeros({3, 2})); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { add(a, Tensor::zeros({2})); }), ErrorCode::kShapeMismatch);
  EXPECT_NO_THROW(add(a, Tensor::zeros({3})));
  EXPECT_EQ(code_of([&] { mul(a, Tensor::zeros({3})); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { reshape(a, {4}); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { slice(a, 1, 2, 4); }), ErrorCode::kShapeMismatch);
  const Tensor parts[2] = {a, Tensor::zeros({2, 2})};
  EXPECT_EQ(code_of([&] { concat(parts, 0); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([&] { cross_entropy(a, Tensor::zeros({3, 2})); }), ErrorCode::kShapeMismatch);
}

TEST(Ops, NumericFailureNamesOp) {
  auto a = Tensor::from({1}, {1e308});
  try {
    scale(a, 10.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNumericFailure);
    EXPECT_NE(std::string(e.what()).find("scale"), std::string::npos);
  }
}

TEST(Ops, SoftmaxRowsSumToOne) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto x = random_tensor(rng, {4, 7}, 30.0, false);
    auto y = softmax(x);
    for (int r = 0; r < 4; ++r) {
      double s = 0.0;
      for (int j = 0; j < 7; ++j) s += y.at(r, j);
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
}

TEST(Backward, Basics) {
  auto w = Tensor::from({1}, {3.0}, true);
  backward(mul(w, w));
  EXPECT_DOUBLE_EQ(w.grad()[0], 6.0);
  auto u = Tensor::from({1}, {2.0}, true);
  auto v = Tensor::from({1}, {5.0}, true);
  backward(mul(v, v));
  EXPECT_EQ(u.grad()[0], 0.0);
  EXPECT_EQ(code_of([&] { backward(Tensor::zeros({2}, true)); }), ErrorCode::kNonScalarLoss);
}

TEST(Backward, NoGradSkipsGraph) {
  auto w = Tensor::from({1}, {3.0}, true);
  NoGradGuard guard;
  auto y = mul(w, w);
  EXPECT_FALSE(y.requires_grad());
}

TEST(Dense, Examples) {
  Rng rng(2);
  auto x = random_tensor(rng, {2, 3}, 1.0, false);
  auto z = dense(x, {Tensor::zeros({3, 4}), Tensor::zeros({4})}, Activation::kRelu);
  for (double v : z.data()) EXPECT_EQ(v, 0.0);
  auto eye = Tensor::from({3, 3}, {1, 0, 0, 0, 1, 0, 0, 0, 1});
  EXPECT_EQ(dense(x, {eye, Tensor::zeros({3})}, Activation::kLinear).data(), x.data());
  auto w = random_tensor(rng, {3, 2}, 1.0, false);
  auto b = random_tensor(rng, {2}, 1.0, false);
  auto y = dense(x, {w, b}, Activation::kTanh);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = b.data()[j];
      for (int k = 0; k < 3; ++k) s += x.at(i, k) * w.at(k, j);
      EXPECT_NEAR(y.at(i, j), std::tanh(s), 1e-14);
    }
}

TEST(Lstm, CellExamples) {
  const std::size_t d = 2, h = 3;
  LstmParams zero{Tensor::zeros({d, 4 * h}), Tensor::zeros({h, 4 * h}), Tensor::zeros({4 * h})};
  auto s = lstm_cell(Tensor::zeros({1, d}), lstm_zero_state(h), zero);
  for (double v : s.h.data()) EXPECT_EQ(v, 0.0);
  for (double v : s.c.data()) EXPECT_EQ(v, 0.0);

  // i saturated shut, f saturated open
  std::vector<double> bias(4 * h, 0.0);
  for (std::size_t j = 0; j < h; ++j) {
    bias[j] = -50.0;
    bias[h + j] = 50.0;
  }
  LstmParams gate{Tensor::zeros({d, 4 * h}), Tensor::zeros({h, 4 * h}), Tensor::from({4 * h}, bias)};
  auto c0 = Tensor::from({1, h}, {0.3, -0.7, 1.2});
  auto s2 = lstm_cell(Tensor::from({1, d}, {1.0, -1.0}), {Tensor::zeros({1, h}), c0}, gate);
  for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(s2.c.data()[j], c0.data()[j], 1e-12);
}

TEST(Lstm, CellMatchesScalarRecurrence) {
  Rng rng(9);
  const std::size_t d = 2, h = 2;
  LstmParams p{random_tensor(rng, {d, 4 * h}, 1.0, false), random_tensor(rng, {h, 4 * h}, 1.0, false),
               random_tensor(rng, {4 * h}, 1.0, false)};
  auto x = random_tensor(rng, {1, d}, 1.0, false);
  auto hp = random_tensor(rng, {1, h}, 1.0, false);
  auto cp = random_tensor(rng, {1, h}, 1.0, false);
  auto s = lstm_cell(x, {hp, cp}, p);
  for (std::size_t u = 0; u < h; ++u) {
    double z[4];
    for (std::size_t gi = 0; gi < 4; ++gi) {
      const std::size_t col = gi * h + u;
      double acc = p.bias.data()[col];
      for (std::size_t k = 0; k < d; ++k) acc += x.data()[k] * p.input_weight.at(k, col);
      for (std::size_t k = 0; k < h; ++k) acc += hp.data()[k] * p.recurrent_weight.at(k, col);
      z[gi] = acc;
    }
    const double c = sigm(z[1]) * cp.data()[u] + sigm(z[0]) * std::tanh(z[2]);
    EXPECT_NEAR(s.c.data()[u], c, 1e-14);
    EXPECT_NEAR(s.h.data()[u], sigm(z[3]) * std::tanh(c), 1e-14);
  }
}

TEST(Lstm, BiLstmComposition) {
  Rng rng(4);
  const std::size_t t = 3, d = 2, h = 2;
  auto mk = [&] {
    return LstmParams{random_tensor(rng, {d, 4 * h}, 1.0, false), random_tensor(rng, {h, 4 * h}, 1.0, false),
                      random_tensor(rng, {4 * h}, 1.0, false)};
  };
  LstmParams f = mk(), b = mk();
  auto x = random_tensor(rng, {t, d}, 1.0, false);
  auto out = bilstm(x, {}, f, b);
  ASSERT_EQ(out.shape(), (Shape{t, 2 * h}));
  auto row = [&](std::size_t i) { return slice(x, 0, i, i + 1); };
  auto sf = lstm_zero_state(h);
  for (std::size_t i = 0; i < t; ++i) {
    sf = lstm_cell(row(i), sf, f);
    for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(out.at(i, j), sf.h.data()[j], 1e-14);
  }
  auto sb = lstm_zero_state(h);
  for (std::size_t i = t; i-- > 0;) {
    sb = lstm_cell(row(i), sb, b);
    for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(out.at(i, h + j), sb.h.data()[j], 1e-14);
  }
}

TEST(Lstm, PalindromeSymmetryAndMask) {
  Rng rng(6);
  const std::size_t d = 2, h = 3;
  LstmParams p{random_tensor(rng, {d, 4 * h}, 1.0, false), random_tensor(rng, {h, 4 * h}, 1.0, false),
               random_tensor(rng, {4 * h}, 1.0, false)};
  auto x = Tensor::from({3, d}, {0.1, 0.5, -0.4, 0.9, 0.1, 0.5});
  auto out = bilstm(x, {}, p, p);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(out.at(i, j), out.at(2 - i, h + j), 1e-14);

  auto one = bilstm(slice(x, 0, 0, 1), {}, p, p);
  for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(one.at(0, j), one.at(0, h + j), 1e-15);

  // masked middle step: zeros out, state skips over it
  const std::vector<std::uint8_t> mask{1, 0, 1};
  auto masked = lstm(x, mask, p, false);
  for (std::size_t j = 0; j < h; ++j) EXPECT_EQ(masked.at(1, j), 0.0);
  auto s = lstm_cell(slice(x, 0, 0, 1), lstm_zero_state(h), p);
  s = lstm_cell(slice(x, 0, 2, 3), s, p);
  for (std::size_t j = 0; j < h; ++j) EXPECT_NEAR(masked.at(2, j), s.h.data()[j], 1e-14);

  EXPECT_EQ(code_of([&] { lstm(Tensor::zeros({0, d}), {}, p, false); }), ErrorCode::kEmptySequence);
}

TEST(Attention, Examples) {
  Rng rng(8);
  const std::size_t d = 4;
  AttentionParams p{random_tensor(rng, {d, d}, 1.0, false), random_tensor(rng, {d, d}, 1.0, false),
                    random_tensor(rng, {d, d}, 1.0, false)};
  auto x1 = random_tensor(rng, {1, d}, 1.0, false);
  auto r1 = self_attention(x1, {}, p);
  auto v1 = matmul(x1, p.value);
  for (std::size_t j = 0; j < d; ++j) EXPECT_NEAR(r1.output.at(0, j), v1.at(0, j), 1e-14);

  auto x2 = concat(std::vector<Tensor>{x1, x1}, 0);
  auto r2 = self_attention(x2, {}, p);
  for (double w : r2.weights.data()) EXPECT_NEAR(w, 0.5, 1e-15);

  // 3x4 case against direct arithmetic
  auto x = random_tensor(rng, {3, d}, 1.0, false);
  auto r = self_attention(x, {}, p);
  auto q = matmul(x, p.query), k = matmul(x, p.key), v = matmul(x, p.value);
  for (std::size_t i = 0; i < 3; ++i) {
    double s[3], z = 0.0, mx = -1e300;
    for (std::size_t j = 0; j < 3; ++j) {
      s[j] = 0.0;
      for (std::size_t c = 0; c < d; ++c) s[j] += q.at(i, c) * k.at(j, c);
      s[j] /= 2.0;  // sqrt(4)
      mx = std::max(mx, s[j]);
    }
    for (double& e : s) z += (e = std::exp(e - mx));
    for (std::size_t c = 0; c < d; ++c) {
      double o = 0.0;
      for (std::size_t j = 0; j < 3; ++j) o += s[j] / z * v.at(j, c);
      EXPECT_NEAR(r.output.at(i, c), o, 1e-14);
    }
  }
}

TEST(Attention, RowsSumToOneOverOpenKeys) {
  Rng rng(10);
  const std::size_t d = 3, t = 6;
  AttentionParams p{random_tensor(rng, {d, d}, 2.0, false), random_tensor(rng, {d, d}, 2.0, false),
                    random_tensor(rng, {d, d}, 2.0, false)};
  const std::vector<std::uint8_t> mask{1, 1, 0, 1, 0, 1};
  for (int trial = 0; trial < 20; ++trial) {
    auto x = random_tensor(rng, {t, d}, 3.0, false);
    auto w = self_attention(x, mask, p).weights;
    for (std::size_t i = 0; i < t; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < t; ++j) {
        if (!mask[j]) {
          EXPECT_EQ(w.at(i, j), 0.0);
        }
        s += w.at(i, j);
      }
      EXPECT_NEAR(s, 1.0, 1e-9);
    }
  }
  EXPECT_EQ(code_of([&] { self_attention(random_tensor(rng, {2, 2}, 1.0, false), {}, p); }),
            ErrorCode::kShapeMismatch);
}

TEST(Conv, Examples) {
  Rng rng(12);
  auto x = random_tensor(rng, {5, 2}, 1.0, false);
  ConvParams ident{Tensor::from({2, 2}, {1, 0, 0, 1}), Tensor::zeros({2}), 1};
  EXPECT_EQ(conv1d(x, ident, Activation::kLinear).data(), x.data());

  // averaging kernel of width 3 on a constant sequence, interior rows
  auto c = Tensor::full({6, 1}, 2.5);
  ConvParams avg{Tensor::full({3, 1}, 1.0 / 3.0), Tensor::zeros({1}), 3};
  auto y = conv1d(c, avg, Activation::kLinear);
  for (std::size_t t = 1; t + 1 < 6; ++t) EXPECT_NEAR(y.at(t, 0), 2.5, 1e-15);

  // sliding-window oracle, k = 3
  const std::size_t k = 3, d = 2, f = 2;
  ConvParams p{random_tensor(rng, {k * d, f}, 1.0, false), random_tensor(rng, {f}, 1.0, false), k};
  auto out = conv1d(x, p, Activation::kLinear);
  for (int t = 0; t < 5; ++t)
    for (std::size_t o = 0; o < f; ++o) {
      double s = p.bias.data()[o];
      for (int tap = 0; tap < 3; ++tap) {
        const int src = t - 1 + tap;
        if (src < 0 || src >= 5) continue;
        for (std::size_t j = 0; j < d; ++j) s += x.at(src, j) * p.weight.at(tap * d + j, o);
      }
      EXPECT_NEAR(out.at(t, o), s, 1e-14);
    }
  EXPECT_EQ(code_of([&] { conv1d(x, {Tensor::zeros({3, 2}), Tensor::zeros({2}), 2}, Activation::kLinear); }),
            ErrorCode::kShapeMismatch);
}

TEST(Pool, Examples) {
  EXPECT_EQ(global_average_pool(Tensor::full({4, 2}, 1.5), {}).data(), (std::vector<double>{1.5, 1.5}));
  EXPECT_EQ(global_average_pool(Tensor::from({2, 1}, {0, 2}), {}).item(), 1.0);
  const std::vector<std::uint8_t> mask{1, 0, 1};
  EXPECT_EQ(global_average_pool(Tensor::from({3, 1}, {1, 100, 3}), mask).item(), 2.0);
  const std::vector<std::uint8_t> none{0, 0};
  EXPECT_EQ(code_of([&] { global_average_pool(Tensor::zeros({2, 1}), none); }), ErrorCode::kAllMasked);
}

TEST(Dropout, Examples) {
  Rng rng(13);
  auto x = random_tensor(rng, {4, 4}, 1.0, false);
  EXPECT_EQ(dropout(x, 0.0, true, rng).data(), x.data());
  EXPECT_EQ(dropout(x, 0.7, false, rng).data(), x.data());
  EXPECT_EQ(code_of([&] { dropout(x, 1.0, true, rng); }), ErrorCode::kInvalidRate);
  EXPECT_EQ(code_of([&] { dropout(x, -0.1, true, rng); }), ErrorCode::kInvalidRate);

  // expectation preserved within 1%
  auto ones = Tensor::full({1, 1000}, 1.0);
  double total = 0.0;
  const int draws = 200;
  for (int i = 0; i < draws; ++i) total += reduce_mean(dropout(ones, 0.3, true, rng)).item();
  EXPECT_NEAR(total / draws, 1.0, 0.01);
}

TEST(CrossEntropy, Examples) {
  auto perfect = Tensor::from({2, 3}, {1, 0, 0, 0, 0, 1});
  EXPECT_LE(cross_entropy(perfect, perfect).item(), 1e-11);
  auto uni = Tensor::full({1, 3}, 1.0 / 3.0);
  EXPECT_NEAR(cross_entropy(uni, Tensor::from({1, 3}, {0, 1, 0})).item(), std::log(3.0), 1e-12);
  auto p = Tensor::from({2, 3}, {0.2, 0.5, 0.3, 0.6, 0.1, 0.3});
  auto t = Tensor::from({2, 3}, {0, 0, 1, 1, 0, 0});
  EXPECT_NEAR(cross_entropy(p, t).item(), -(std::log(0.3) + std::log(0.6)) / 2.0, 1e-15);
  // clipping keeps a zero probability finite
  auto z = Tensor::from({1, 3}, {0, 1, 0});
  EXPECT_NEAR(cross_entropy(z, Tensor::from({1, 3}, {1, 0, 0})).item(), -std::log(1e-12), 1e-9);
}

TEST(Adam, HandExample) {
  std::vector<double> w{1.0};
  std::vector<std::vector<double>*> ws{&w};
  const std::vector<std::vector<double>> g{{2.0}};
  Adam adam({0.1, 0.9, 0.999, 1e-8});
  adam.step(ws, g);
  // m = 0.2, v = 0.004, mhat = 2, vhat = 4
  EXPECT_NEAR(w[0], 1.0 - 0.1 * 2.0 / (2.0 + 1e-8), 1e-15);
  EXPECT_NEAR(w[0], 0.9, 1e-6);
}

TEST(Adam, ZeroGradAndDeterminism) {
  std::vector<double> w{0.7, -1.2};
  std::vector<std::vector<double>*> ws{&w};
  const std::vector<std::vector<double>> g{{0.0, 0.0}};
  Adam adam;
  for (int i = 0; i < 100; ++i) adam.step(ws, g);
  EXPECT_EQ(w, (std::vector<double>{0.7, -1.2}));

  auto run = [] {
    Rng rng(77);
    std::vector<double> v{0.0, 0.0, 0.0};
    std::vector<std::vector<double>*> vs{&v};
    Adam a({0.01});
    for (int i = 0; i < 50; ++i) {
      std::vector<std::vector<double>> gg{{rng.normal(), rng.normal(), rng.normal()}};
      a.step(vs, gg);
    }
    return v;
  };
  EXPECT_EQ(run(), run());

  std::vector<double> other{1.0};
  std::vector<std::vector<double>*> os{&other, &other};
  EXPECT_EQ(code_of([&] { adam.step(os, std::vector<std::vector<double>>{{0.0}, {0.0}}); }), ErrorCode::kShapeMismatch);
}

TEST(Schedule, LrAt) {
  LrSchedule s{4e-5, 0.1};
  EXPECT_EQ(lr_at(s, 0), 4e-5);
  EXPECT_NEAR(lr_at(s, 10), 4e-5 * std::exp(-1.0), 1e-12);
  EXPECT_NEAR(lr_at(s, 10), 1.4715e-5, 1e-9);
  for (int e = 0; e < 100; ++e) {
    EXPECT_GT(lr_at(s, e), lr_at(s, e + 1));
    EXPECT_GT(lr_at(s, e), 0.0);
  }
}

TEST(Init, GlorotAndOrthogonal) {
  Rng rng(3);
  auto w = glorot_uniform(rng, 10, 20);
  const double lim = std::sqrt(6.0 / 30.0);
  for (double x : w) EXPECT_LE(std::abs(x), lim);
  const std::size_t h = 5, cols = 20;
  auto u = orthogonal(rng, h, cols);
  for (std::size_t a = 0; a < h; ++a)
    for (std::size_t b = 0; b < h; ++b) {
      double dot = 0.0;
      for (std::size_t j = 0; j < cols; ++j) dot += u[a * cols + j] * u[b * cols + j];
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Checkpoint, RoundTrip) {
  Rng rng(21);
  ParameterSet params;
  params.add("w", {3, 2}, glorot_uniform(rng, 3, 2));
  params.add("b", {2}, {0.125, -3.3});
  EXPECT_EQ(code_of([&] { params.add("w", {1}, {0.0}); }), ErrorCode::kInvalidConfig);
  const auto dir = std::filesystem::temp_directory_path() / "tlab_ckpt_test";
  std::filesystem::remove_all(dir);
  save_checkpoint(dir / "model", params, "abc123");
  EXPECT_TRUE(std::filesystem::exists(dir / "model.json"));
  EXPECT_EQ(std::filesystem::file_size(dir / "model.bin"), 8u * 4u);

  const auto snap = take_snapshot(params);
  ParameterSet other;
  other.add("w", {3, 2}, std::vector<double>(6, 0.0));
  other.add("b", {2}, {0.0, 0.0});
  load_checkpoint(dir / "model", other, "abc123");
  EXPECT_EQ(take_snapshot(other), snap);
  EXPECT_EQ(other.items()[1].value.data()[0], 0.125);
  EXPECT_EQ(code_of([&] { load_checkpoint(dir / "model", other, "zzz"); }), ErrorCode::kHashMismatch);

  ParameterSet wrong;
  wrong.add("w", {2, 3}, std::vector<double>(6, 0.0));
  wrong.add("b", {2}, {0.0, 0.0});
  EXPECT_EQ(code_of([&] { load_checkpoint(dir / "model", wrong, "abc123"); }), ErrorCode::kShapeMismatch);
  std::filesystem::remove_all(dir);
}
