// SPDX-License-Identifier: Apache-2.0
#include <immintrin.h>

#include <cmath>

#include "recip/simd/kernels.hpp"

namespace recip::simd::avx2 {
namespace {

double fold(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[2]) + (l[1] + l[3]);
}

}  // namespace

Moments sum_sumsq(const double* x, std::size_t n) {
  __m256d s = _mm256_setzero_pd(), q = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    s = _mm256_add_pd(s, v);
    q = _mm256_add_pd(q, _mm256_mul_pd(v, v));
  }
  alignas(32) double ls[4], lq[4];
  _mm256_store_pd(ls, s);
  _mm256_store_pd(lq, q);
  for (std::size_t k = 0; i < n; ++i, ++k) {
    ls[k] += x[i];
    lq[k] += x[i] * x[i];
  }
  return {(ls[0] + ls[2]) + (ls[1] + ls[3]), (lq[0] + lq[2]) + (lq[1] + lq[3])};
}

double dot(const double* x, const double* y, std::size_t n) {
  __m256d s = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) s = _mm256_add_pd(s, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  if (i == n) return fold(s);
  alignas(32) double l[4];
  _mm256_store_pd(l, s);
  for (std::size_t k = 0; i < n; ++i, ++k) l[k] += x[i] * y[i];
  return (l[0] + l[2]) + (l[1] + l[3]);
}

double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d r = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_mul_pd(_mm256_loadu_pd(s + i), _mm256_loadu_pd(b + i)));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, r));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, m);
  double out = 0.0;
  for (double v : l) out = v > out ? v : out;
  for (; i < n; ++i) {
    double r = std::fabs(a[i] - s[i] * b[i]);
    if (r > out) out = r;
  }
  return out;
}

}  // namespace recip::simd::avx2
