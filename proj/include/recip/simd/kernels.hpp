// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

namespace recip::simd {

// Every backend accumulates in four interleaved lanes (element i goes to lane
// i % 4) and combines them as (l0 + l2) + (l1 + l3), so results are bit-identical.

enum class Backend { scalar, avx2, neon };

struct Moments {
  double sum = 0.0;
  double sumsq = 0.0;
};

const char* backend_name(Backend b);
bool backend_available(Backend b);
Backend active_backend();
/// Forces a backend (tests, RECIP_SIMD env). Throws UnsupportedError if unavailable.
void set_backend(Backend b);

Moments sum_sumsq(std::span<const double> x);
double dot(std::span<const double> x, std::span<const double> y);
/// max_i |a_i - s_i * b_i|; 0 for empty input.
double max_abs_residual(std::span<const double> a, std::span<const double> s, std::span<const double> b);

namespace scalar {
Moments sum_sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n);
}  // namespace scalar

namespace avx2 {
Moments sum_sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n);
}  // namespace avx2

namespace neon {
Moments sum_sumsq(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double max_abs_residual(const double* a, const double* s, const double* b, std::size_t n);
}  // namespace neon

}  // namespace recip::simd
