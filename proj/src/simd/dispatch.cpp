// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <cstdlib>
#include <string>

#include "recip/error.hpp"
#include "recip/simd/kernels.hpp"

namespace recip::simd {
namespace {

Backend detect() {
  if (const char* env = std::getenv("RECIP_SIMD")) {
    std::string want(env);
    if (want == "scalar") return Backend::scalar;
    if (want == "avx2" && backend_available(Backend::avx2)) return Backend::avx2;
    if (want == "neon" && backend_available(Backend::neon)) return Backend::neon;
  }
  if (backend_available(Backend::avx2)) return Backend::avx2;
  if (backend_available(Backend::neon)) return Backend::neon;
  return Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::avx2:
      return "avx2";
    case Backend::neon:
      return "neon";
    default:
      return "scalar";
  }
}

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(RECIP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Backend::neon:
#if defined(RECIP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b)) throw UnsupportedError(std::string("SIMD backend unavailable: ") + backend_name(b));
  current().store(b, std::memory_order_relaxed);
}

Moments sum_sumsq(std::span<const double> x) {
  switch (active_backend()) {
#if defined(RECIP_HAVE_AVX2)
    case Backend::avx2:
      return avx2::sum_sumsq(x.data(), x.size());
#endif
#if defined(RECIP_HAVE_NEON)
    case Backend::neon:
      return neon::sum_sumsq(x.data(), x.size());
#endif
    default:
      return scalar::sum_sumsq(x.data(), x.size());
  }
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InputError("dot: length mismatch");
  switch (active_backend()) {
#if defined(RECIP_HAVE_AVX2)
    case Backend::avx2:
      return avx2::dot(x.data(), y.data(), x.size());
#endif
#if defined(RECIP_HAVE_NEON)
    case Backend::neon:
      return neon::dot(x.data(), y.data(), x.size());
#endif
    default:
      return scalar::dot(x.data(), y.data(), x.size());
  }
}

double max_abs_residual(std::span<const double> a, std::span<const double> s, std::span<const double> b) {
  if (a.size() != s.size() || a.size() != b.size()) throw InputError("max_abs_residual: length mismatch");
  switch (active_backend()) {
#if defined(RECIP_HAVE_AVX2)
    case Backend::avx2:
      return avx2::max_abs_residual(a.data(), s.data(), b.data(), a.size());
#endif
#if defined(RECIP_HAVE_NEON)
    case Backend::neon:
      return neon::max_abs_residual(a.data(), s.data(), b.data(), a.size());
#endif
    default:
      return scalar::max_abs_residual(a.data(), s.data(), b.data(), a.size());
  }
}

}  // namespace recip::simd
