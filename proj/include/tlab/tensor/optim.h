#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tlab/tensor/layers.h"

namespace tlab::tensor {

struct AdamConfig {
  double lr = 4e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias-corrected moments.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  // One update of every parameter from its accumulated gradient. The
  // parameter list must keep the same shapes between calls (ShapeMismatch).
  void step(std::span<Parameter> params);
  // Raw form used by the above.
  void step(std::span<std::vector<double>*> weights, std::span<const std::vector<double>> grads);

  void set_lr(double lr) { config_.lr = lr; }
  double lr() const { return config_.lr; }
  std::size_t steps() const { return t_; }

 private:
  AdamConfig config_;
  std::vector<std::vector<double>> m_, v_;
  std::size_t t_ = 0;
};

struct LrSchedule {
  double lr0 = 4e-5;
  double k = 0.1;
};

// lr0 * exp(-k * epoch). Throws InvalidConfig for lr0 <= 0 or epoch < 0.
double lr_at(const LrSchedule& schedule, int epoch);

}  // namespace tlab::tensor
