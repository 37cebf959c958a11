#include "tlab/tensor/optim.h"

#include <cmath>

#include "tlab/common/error.h"

namespace tlab::tensor {

void Adam::step(std::span<Parameter> params) {
  std::vector<std::vector<double>*> weights;
  std::vector<std::vector<double>> grads;
  weights.reserve(params.size());
  grads.reserve(params.size());
  for (auto& p : params) {
    weights.push_back(&p.value.mutable_data());
    grads.push_back(p.value.grad());
  }
  step(weights, grads);
}

void Adam::step(std::span<std::vector<double>*> weights, std::span<const std::vector<double>> grads) {
  if (weights.size() != grads.size()) throw Error(ErrorCode::kShapeMismatch, "adam: weights and grads differ in count");
  if (m_.empty()) {
    for (const auto* w : weights) {
      m_.emplace_back(w->size(), 0.0);
      v_.emplace_back(w->size(), 0.0);
    }
  }
  if (m_.size() != weights.size()) throw Error(ErrorCode::kShapeMismatch, "adam: parameter count changed");
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i]->size() != m_[i].size() || grads[i].size() != m_[i].size()) {
      throw Error(ErrorCode::kShapeMismatch, "adam: parameter " + std::to_string(i) + " changed size");
    }
  }
  ++t_;
  const double b1 = config_.beta1, b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    auto& w = *weights[i];
    const auto& g = grads[i];
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      w[j] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
    }
  }
}

double lr_at(const LrSchedule& schedule, int epoch) {
  if (!(schedule.lr0 > 0.0)) throw Error(ErrorCode::kInvalidConfig, "lr0 must be > 0");
  if (epoch < 0) throw Error(ErrorCode::kInvalidConfig, "epoch must be >= 0");
  return schedule.lr0 * std::exp(-schedule.k * static_cast<double>(epoch));
}

}  // namespace tlab::tensor
