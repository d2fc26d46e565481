// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#include "svreid/kernels/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <string>

#include "svreid/core/errors.hpp"

namespace svreid::kernels {

namespace {

struct Table {
  float (*dot)(const float*, const float*, std::size_t);
  float (*sumsq)(const float*, std::size_t);
  void (*add_inplace)(float*, const float*, std::size_t);
  void (*scale_inplace)(float*, std::size_t, float);
  void (*clip01_inplace)(float*, std::size_t);
  void (*modulate_inplace)(float*, const float*, std::size_t);
};

constexpr Table kScalarTable = {
    &scalar::dot,           &scalar::sumsq,          &scalar::add_inplace,
    &scalar::scale_inplace, &scalar::clip01_inplace, &scalar::modulate_inplace,
};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Table kAvx2Table = {
    &avx2::dot,           &avx2::sumsq,          &avx2::add_inplace,
    &avx2::scale_inplace, &avx2::clip01_inplace, &avx2::modulate_inplace,
};
#endif

const Table* table_for(Backend b) {
#if defined(__x86_64__) || defined(_M_X64)
  if (b == Backend::avx2) return &kAvx2Table;
#endif
  (void)b;
  return &kScalarTable;
}

Backend detect_default() {
  if (const char* env = std::getenv("SVREID_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2)) return Backend::avx2;
    return Backend::scalar;
  }
  return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

struct State {
  std::atomic<Backend> backend{detect_default()};
  std::atomic<const Table*> table{table_for(backend.load())};
};

State& state() {
  static State s;
  return s;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

bool backend_supported(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

Backend active_backend() { return state().backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_supported(b)) {
    throw ConfigError(std::string("kernel backend not supported on this host: ") + backend_name(b));
  }
  state().backend.store(b, std::memory_order_relaxed);
  state().table.store(table_for(b), std::memory_order_relaxed);
}

float dot(const float* a, const float* b, std::size_t n) {
  return state().table.load(std::memory_order_relaxed)->dot(a, b, n);
}

float sumsq(const float* x, std::size_t n) {
  return state().table.load(std::memory_order_relaxed)->sumsq(x, n);
}

void add_inplace(float* acc, const float* x, std::size_t n) {
  state().table.load(std::memory_order_relaxed)->add_inplace(acc, x, n);
}

void scale_inplace(float* x, std::size_t n, float s) {
  state().table.load(std::memory_order_relaxed)->scale_inplace(x, n, s);
}

void clip01_inplace(float* x, std::size_t n) {
  state().table.load(std::memory_order_relaxed)->clip01_inplace(x, n);
}

void modulate_inplace(float* y, const float* gain, std::size_t n) {
  state().table.load(std::memory_order_relaxed)->modulate_inplace(y, gain, n);
}

}  // namespace svreid::kernels
