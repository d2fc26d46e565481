// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <cstddef>

namespace svreid::kernels {

// Runtime-selected backend for the float inner loops. The scalar kernels
// are the reference implementation; the AVX2 variants must agree with
// them within floating-point reassociation tolerance (equivalence-tested).
enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);
bool backend_supported(Backend b);

// Active backend. Defaults to the best supported one; the environment
// variable SVREID_KERNELS=scalar|avx2 overrides at startup.
Backend active_backend();
void set_backend(Backend b);  // throws ConfigError when unsupported

float dot(const float* a, const float* b, std::size_t n);
float sumsq(const float* x, std::size_t n);
void add_inplace(float* acc, const float* x, std::size_t n);
void scale_inplace(float* x, std::size_t n, float s);
void clip01_inplace(float* x, std::size_t n);
// y[i] *= 1 + gain[i]
void modulate_inplace(float* y, const float* gain, std::size_t n);

// Reference kernels, always available regardless of the active backend.
namespace scalar {
float dot(const float* a, const float* b, std::size_t n);
float sumsq(const float* x, std::size_t n);
void add_inplace(float* acc, const float* x, std::size_t n);
void scale_inplace(float* x, std::size_t n, float s);
void clip01_inplace(float* x, std::size_t n);
void modulate_inplace(float* y, const float* gain, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
float dot(const float* a, const float* b, std::size_t n);
float sumsq(const float* x, std::size_t n);
void add_inplace(float* acc, const float* x, std::size_t n);
void scale_inplace(float* x, std::size_t n, float s);
void clip01_inplace(float* x, std::size_t n);
void modulate_inplace(float* y, const float* gain, std::size_t n);
}  // namespace avx2
#endif

}  // namespace svreid::kernels
