// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "recip/simd/kernels.hpp"

namespace recip::simd::scalar {

Moments sum_sumsq(const double* x, std::size_t n) {
  double s[4] = {0, 0, 0, 0}, q[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    s[i & 3] += x[i];
    q[i & 3] += x[i] * x[i];
  }
  return {(s[0] + s[2]) + (s[1] + s[3]), (q[0] + q[2]) + (q[1] + q[3])};
}

double dot(const double* x, const double* y, std::size_t n) {
  double s[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) s[i & 3] += x[i] * y[i];
  return (s[0] + s[2]) + (s[1] + s[3]);
}

double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double r = std::fabs(a[i] - s[i] * b[i]);
    if (r > m) m = r;
  }
  return m;
}

}  // namespace recip::simd::scalar
