// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include <algorithm>

#include "svreid/kernels/kernels.hpp"

namespace svreid::kernels::scalar {

// Stored data is float32; accumulations run in double.

float dot(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return static_cast<float>(acc);
}

float sumsq(const float* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(x[i]) * static_cast<double>(x[i]);
  }
  return static_cast<float>(acc);
}

void add_inplace(float* acc, const float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    acc[i] += x[i];
  }
}

void scale_inplace(float* x, std::size_t n, float s) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] *= s;
  }
}

void clip01_inplace(float* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = std::clamp(x[i], 0.0f, 1.0f);
  }
}

void modulate_inplace(float* y, const float* gain, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    y[i] *= 1.0f + gain[i];
  }
}

}  // namespace svreid::kernels::scalar
