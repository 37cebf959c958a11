#include "tlab/explain/lime.h"

#include <cmath>
#include <exception>

#include "tlab/common/error.h"
#include "tlab/common/parallel.h"
#include "tlab/common/rng.h"

namespace tlab::explain {

double presence_distance(std::span<const std::uint8_t> z) {
  std::size_t on = 0;
  for (auto b : z) on += b ? 1 : 0;
  if (on == 0 || z.empty()) return 1.0;
  return 1.0 - std::sqrt(static_cast<double>(on) / static_cast<double>(z.size()));
}

std::vector<std::vector<std::uint8_t>> lime_samples(std::size_t features, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::uint8_t>> out;
  out.emplace_back(features, 1);
  while (out.size() < n) {
    std::vector<std::uint8_t> z(features);
    for (auto& b : z) b = rng.bernoulli(0.5) ? 1 : 0;
    out.push_back(std::move(z));
  }
  return out;
}

WeightedFit weighted_ridge(const std::vector<std::vector<std::uint8_t>>& z, std::span<const double> y,
                           std::span<const double> weights, double lambda) {
  if (z.empty() || z.size() != y.size() || y.size() != weights.size())
    throw Error(ErrorCode::kLengthMismatch, "weighted_ridge: sample, target and weight counts differ");
  bool varied = false;
  for (const auto& row : z)
    if (row != z[0]) varied = true;
  if (!varied) throw Error(ErrorCode::kDegenerateSamples, "all perturbation samples are identical");

  const std::size_t d = z[0].size() + 1;
  std::vector<std::vector<double>> a(d, std::vector<double>(d + 1, 0.0));
  std::vector<double> x(d);
  for (std::size_t s = 0; s < z.size(); ++s) {
    x[0] = 1.0;
    for (std::size_t j = 1; j < d; ++j) x[j] = z[s][j - 1];
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) a[r][c] += weights[s] * x[r] * x[c];
      a[r][d] += weights[s] * x[r] * y[s];
    }
  }
  for (std::size_t j = 1; j < d; ++j) a[j][j] += lambda;

  // Gauss-Jordan with partial pivoting
  for (std::size_t col = 0; col < d; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < d; ++r)
      if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
    if (std::fabs(a[piv][col]) < 1e-300)
      throw Error(ErrorCode::kDegenerateSamples, "surrogate normal equations are singular");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < d; ++r) {
      if (r == col || a[r][col] == 0.0) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= d; ++c) a[r][c] -= f * a[col][c];
    }
  }
  WeightedFit fit;
  fit.intercept = a[0][d] / a[0][0];
  for (std::size_t j = 1; j < d; ++j) fit.coef.push_back(a[j][d] / a[j][j]);

  double wsum = 0.0, ybar = 0.0;
  for (std::size_t s = 0; s < y.size(); ++s) {
    wsum += weights[s];
    ybar += weights[s] * y[s];
  }
  ybar /= wsum;
  double ss_tot = 0.0, ss_res = 0.0;
  for (std::size_t s = 0; s < y.size(); ++s) {
    double pred = fit.intercept;
    for (std::size_t j = 0; j + 1 < d; ++j) pred += fit.coef[j] * z[s][j];
    ss_res += weights[s] * (y[s] - pred) * (y[s] - pred);
    ss_tot += weights[s] * (y[s] - ybar) * (y[s] - ybar);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res < 1e-24 ? 1.0 : 0.0);
  return fit;
}

Attribution lime_explain(const ProbabilityFn& fn, const std::vector<std::string>& tokens, const LimeConfig& cfg,
                         const std::string& doc_id, const std::string& mask_policy) {
  if (tokens.empty()) throw Error(ErrorCode::kInvalidConfig, "lime: document has no tokens");
  if (!(cfg.kernel_width > 0.0)) throw Error(ErrorCode::kInvalidConfig, "lime: kernel_width must be positive");
  if (cfg.n_samples < 2) throw Error(ErrorCode::kInvalidConfig, "lime: need at least 2 samples");
  if (cfg.ridge_lambda < 0.0) throw Error(ErrorCode::kInvalidConfig, "lime: ridge_lambda must be non-negative");

  const auto z = lime_samples(tokens.size(), cfg.n_samples, cfg.seed);
  std::vector<std::vector<double>> probs(z.size());
  parallel_for(z.size(), [&](std::size_t s) {
    try {
      probs[s] = fn(z[s]);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kModelFailure, std::string("model evaluation failed: ") + e.what());
    }
  });
  const std::size_t target = cfg.target_class ? *cfg.target_class : argmax(probs[0]);
  std::vector<double> y(z.size()), w(z.size());
  for (std::size_t s = 0; s < z.size(); ++s) {
    if (probs[s].size() <= target || !std::isfinite(probs[s][target]))
      throw Error(ErrorCode::kModelFailure, "model returned no usable probability for class " + std::to_string(target));
    y[s] = probs[s][target];
    const double dist = presence_distance(z[s]);
    w[s] = std::exp(-dist * dist / (cfg.kernel_width * cfg.kernel_width));
  }
  const auto fit = weighted_ridge(z, y, w, cfg.ridge_lambda);

  Attribution a;
  a.doc_id = doc_id;
  a.tokens = tokens;
  a.phi = fit.coef;
  a.base_value = fit.intercept;
  a.prediction = y[0];
  a.target_class = target;
  a.method = Method::kLime;
  a.mask_policy = mask_policy;
  a.r2 = fit.r2;
  return a;
}

}  // namespace tlab::explain
