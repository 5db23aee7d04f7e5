// SPDX-License-Identifier: Apache-2.0
#include "recip/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>

#include "recip/error.hpp"
#include "recip/simd/kernels.hpp"

namespace recip {

SampleSummary summarize(std::span<const double> x) {
  SampleSummary s;
  s.n = x.size();
  if (x.empty()) return s;
  const auto m = simd::sum_sumsq(x);
  const double n = static_cast<double>(x.size());
  s.mean = m.sum / n;
  if (x.size() > 1) s.variance = std::max(0.0, (m.sumsq - n * s.mean * s.mean) / (n - 1.0));
  s.std_error = std::sqrt(s.variance / n);
  return s;
}

ChiSquareResult chi_square_gof(std::span<const std::int64_t> observed, std::span<const double> probs,
                               double min_expected) {
  if (observed.size() != probs.size()) throw InputError("chi-square: length mismatch");
  double n = 0.0, total_p = 0.0;
  for (auto o : observed) n += static_cast<double>(o);
  for (double p : probs) total_p += p;
  if (n <= 0.0) throw InputError("chi-square: no observations");

  ChiSquareResult r;
  double pooled_obs = 0.0, pooled_exp = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double e = n * probs[i] / total_p;
    const double o = static_cast<double>(observed[i]);
    if (e < min_expected) {
      pooled_obs += o;
      pooled_exp += e;
      continue;
    }
    r.statistic += (o - e) * (o - e) / e;
    ++r.cells;
  }
  if (pooled_exp > 0.0) {
    r.statistic += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++r.cells;
  } else if (pooled_obs > 0.0) {
    r.statistic = INFINITY;  // mass where the model has none
  }
  r.dof = static_cast<int>(r.cells) - 1;
  if (r.dof < 1) {
    r.p_value = std::isfinite(r.statistic) ? 1.0 : 0.0;
    return r;
  }
  if (!std::isfinite(r.statistic)) {
    r.p_value = 0.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw InputError("KS: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_p_value(double d, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double x = (sn + 0.12 + 0.11 / sn) * d;
  if (x < 0.2) return 1.0;
  // Kolmogorov tail 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 ? 1.0 : -1.0) * term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

Interval wilson_interval(std::int64_t hits, std::int64_t n, double z) {
  if (n <= 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace recip
