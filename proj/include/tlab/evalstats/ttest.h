#pragma once

#include <cstddef>
#include <span>

namespace tlab::evalstats {

struct TTestResult {
  double t_value = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;     // two-tailed
  double adjusted_p = 1.0;  // Bonferroni
  bool significant = false; // adjusted_p < alpha
};

// I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double a, double b, double x);
double student_t_cdf(double t, double df);
double two_tailed_p(double t, double df);
double bonferroni(double p, std::size_t comparisons);

// d_i = a_i - b_i. Throws LengthMismatch, TooFewExamples (n < 2) or
// ZeroVariance when every difference is equal.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                         std::size_t comparisons = 1);

}  // namespace tlab::evalstats
