// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 svreid contributors

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace svreid {

// Exit-code categories used by the CLI. Library code throws the typed
// errors below; main() maps them to these codes.
enum class ErrorCode : int {
  ok = 0,
  usage = 2,
  format = 3,
  numerical = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Bad configuration value, unknown config key, invalid scenario spec.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::usage, what) {}
};

// Malformed or truncated input file. Carries the byte offset at which
// parsing failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t byte_offset)
      : Error(ErrorCode::format, what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

// Operands with incompatible shapes (channel counts, grid sizes).
class DimensionError : public Error {
 public:
  explicit DimensionError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

// Mathematically undefined input: zero-norm vector, empty matrix.
class DegenerateInputError : public Error {
 public:
  explicit DegenerateInputError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

// Numerical failure: non-SPD covariance, singular system.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

// Caller violated an API contract (cross-shot frame mixing, mismatched
// categories).
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error(ErrorCode::numerical, what) {}
};

}  // namespace svreid
