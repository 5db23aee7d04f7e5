// SPDX-License-Identifier: Apache-2.0
#include <arm_neon.h>

#include <cmath>

#include "recip/simd/kernels.hpp"

namespace recip::simd::neon {

// Two float64x2 registers hold lanes {0,1} and {2,3}.

Moments sum_sumsq(const double* x, std::size_t n) {
  float64x2_t s01 = vdupq_n_f64(0), s23 = vdupq_n_f64(0), q01 = vdupq_n_f64(0), q23 = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float64x2_t a = vld1q_f64(x + i), b = vld1q_f64(x + i + 2);
    s01 = vaddq_f64(s01, a);
    s23 = vaddq_f64(s23, b);
    q01 = vaddq_f64(q01, vmulq_f64(a, a));
    q23 = vaddq_f64(q23, vmulq_f64(b, b));
  }
  double ls[4], lq[4];
  vst1q_f64(ls, s01);
  vst1q_f64(ls + 2, s23);
  vst1q_f64(lq, q01);
  vst1q_f64(lq + 2, q23);
  for (std::size_t k = 0; i < n; ++i, ++k) {
    ls[k] += x[i];
    lq[k] += x[i] * x[i];
  }
  return {(ls[0] + ls[2]) + (ls[1] + ls[3]), (lq[0] + lq[2]) + (lq[1] + lq[3])};
}

double dot(const double* x, const double* y, std::size_t n) {
  float64x2_t s01 = vdupq_n_f64(0), s23 = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s01 = vaddq_f64(s01, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    s23 = vaddq_f64(s23, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double l[4];
  vst1q_f64(l, s01);
  vst1q_f64(l + 2, s23);
  for (std::size_t k = 0; i < n; ++i, ++k) l[k] += x[i] * y[i];
  return (l[0] + l[2]) + (l[1] + l[3]);
}

double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n) {
  float64x2_t m = vdupq_n_f64(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t r = vsubq_f64(vld1q_f64(a + i), vmulq_f64(vld1q_f64(s + i), vld1q_f64(b + i)));
    m = vmaxq_f64(m, vabsq_f64(r));
  }
  double out = vmaxvq_f64(m);
  for (; i < n; ++i) {
    double r = std::fabs(a[i] - s[i] * b[i]);
    if (r > out) out = r;
  }
  return out;
}

}  // namespace recip::simd::neon
