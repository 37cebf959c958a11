#include "tlab/tensor/init.h"

#include <cmath>

namespace tlab::tensor {

std::vector<double> glorot_uniform(Rng& rng, std::size_t fan_in, std::size_t fan_out) {
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::vector<double> w(fan_in * fan_out);
  for (double& x : w) x = rng.uniform(-limit, limit);
  return w;
}

std::vector<double> orthogonal(Rng& rng, std::size_t rows, std::size_t cols) {
  std::vector<double> w = glorot_uniform(rng, rows, cols);
  const bool by_rows = rows <= cols;
  const std::size_t count = by_rows ? rows : cols;
  const std::size_t len = by_rows ? cols : rows;
  auto at = [&](std::size_t v, std::size_t i) -> double& { return by_rows ? w[v * cols + i] : w[i * cols + v]; };
  for (std::size_t v = 0; v < count; ++v) {
    for (std::size_t u = 0; u < v; ++u) {
      double dot = 0.0;
      for (std::size_t i = 0; i < len; ++i) dot += at(v, i) * at(u, i);
      for (std::size_t i = 0; i < len; ++i) at(v, i) -= dot * at(u, i);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < len; ++i) norm += at(v, i) * at(v, i);
    norm = std::sqrt(norm);
    if (norm < 1e-12) {
      // degenerate draw: fall back to a basis direction
      for (std::size_t i = 0; i < len; ++i) at(v, i) = i == v ? 1.0 : 0.0;
      continue;
    }
    for (std::size_t i = 0; i < len; ++i) at(v, i) /= norm;
  }
  return w;
}

}  // namespace tlab::tensor
