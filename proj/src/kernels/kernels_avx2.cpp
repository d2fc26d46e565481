// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

// AVX2/FMA variants of the float kernels. Compiled with -mavx2 -mfma;
// callers must check backend_supported(Backend::avx2) before dispatching
// here. Eight-lane accumulation with a scalar tail.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include "svreid/kernels/kernels.hpp"

namespace svreid::kernels::avx2 {

namespace {

inline float hsum256(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  return _mm_cvtss_f32(lo);
}

}  // namespace

float dot(const float* a, const float* b, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a + i);
    __m256 vb = _mm256_loadu_ps(b + i);
    acc = _mm256_fmadd_ps(va, vb, acc);
  }
  float res = hsum256(acc);
  for (; i < n; ++i) {
    res += a[i] * b[i];
  }
  return res;
}

float sumsq(const float* x, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    acc = _mm256_fmadd_ps(v, v, acc);
  }
  float res = hsum256(acc);
  for (; i < n; ++i) {
    res += x[i] * x[i];
  }
  return res;
}

void add_inplace(float* acc, const float* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(acc + i);
    __m256 vx = _mm256_loadu_ps(x + i);
    _mm256_storeu_ps(acc + i, _mm256_add_ps(va, vx));
  }
  for (; i < n; ++i) {
    acc[i] += x[i];
  }
}

void scale_inplace(float* x, std::size_t n, float s) {
  const __m256 vs = _mm256_set1_ps(s);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(_mm256_loadu_ps(x + i), vs));
  }
  for (; i < n; ++i) {
    x[i] *= s;
  }
}

void clip01_inplace(float* x, std::size_t n) {
  const __m256 zero = _mm256_setzero_ps();
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    v = _mm256_min_ps(_mm256_max_ps(v, zero), one);
    _mm256_storeu_ps(x + i, v);
  }
  for (; i < n; ++i) {
    x[i] = x[i] < 0.0f ? 0.0f : (x[i] > 1.0f ? 1.0f : x[i]);
  }
}

void modulate_inplace(float* y, const float* gain, std::size_t n) {
  const __m256 one = _mm256_set1_ps(1.0f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vy = _mm256_loadu_ps(y + i);
    __m256 vg = _mm256_add_ps(_mm256_loadu_ps(gain + i), one);
    _mm256_storeu_ps(y + i, _mm256_mul_ps(vy, vg));
  }
  for (; i < n; ++i) {
    y[i] *= 1.0f + gain[i];
  }
}

}  // namespace svreid::kernels::avx2

#endif  // x86_64
