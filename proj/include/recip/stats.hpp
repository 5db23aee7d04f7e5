// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace recip {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error = 0.0;
};

/// Uses the runtime-selected SIMD reduction; fixed summation order.
SampleSummary summarize(std::span<const double> x);

struct ChiSquareResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 1.0;
  std::size_t cells = 0;
};

/// Pearson chi-square of observed counts against cell probabilities. Cells with
/// expected count below `min_expected` are pooled into one residual cell.
ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                               double min_expected = 5.0);

/// sup |F_n - F| of a sample against a continuous cdf.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// P(sqrt(n) D_n > x) asymptotically, with the Stephens small-sample correction.
double ks_p_value(double d, std::size_t n);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

Interval wilson_interval(std::int64_t hits, std::int64_t n, double z);

}  // namespace recip
