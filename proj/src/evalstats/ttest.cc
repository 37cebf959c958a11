#include "tlab/evalstats/ttest.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tlab/common/error.h"

namespace tlab::evalstats {

namespace {

double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-16;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 10000; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h;
  }
  throw Error(ErrorCode::kNumericFailure, "incomplete beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || x < 0.0 || x > 1.0 || std::isnan(x))
    throw Error(ErrorCode::kNumericFailure, "incomplete beta: argument out of domain");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front =
      std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // the fraction converges fast on the side below the mean
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double two_tailed_p(double t, double df) {
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(regularized_incomplete_beta(df / 2.0, 0.5, x), 0.0, 1.0);
}

double student_t_cdf(double t, double df) {
  const double tail = 0.5 * two_tailed_p(t, df);
  return t >= 0.0 ? 1.0 - tail : tail;
}

double bonferroni(double p, std::size_t comparisons) {
  return std::min(1.0, p * static_cast<double>(comparisons));
}

TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha,
                         std::size_t comparisons) {
  if (a.size() != b.size())
    throw Error(ErrorCode::kLengthMismatch,
                "paired_ttest: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " scores");
  if (a.size() < 2) throw Error(ErrorCode::kTooFewExamples, "paired_ttest: need at least 2 pairs");
  if (comparisons == 0) throw Error(ErrorCode::kInvalidConfig, "paired_ttest: comparisons must be positive");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  bool all_equal = true;
  for (std::size_t i = 0; i < n; ++i) {
    d[i] = a[i] - b[i];
    if (d[i] != d[0]) all_equal = false;
  }
  if (all_equal) throw Error(ErrorCode::kZeroVariance, "paired_ttest: all differences are equal");
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  TTestResult r;
  r.df = n - 1;
  r.t_value = mean / (sd / std::sqrt(static_cast<double>(n)));
  r.p_value = two_tailed_p(r.t_value, static_cast<double>(r.df));
  r.adjusted_p = bonferroni(r.p_value, comparisons);
  r.significant = r.adjusted_p < alpha;
  return r;
}

}  // namespace tlab::evalstats
