#pragma once

#include <stdexcept>

namespace orqc {

/// Invalid or unknown experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A run would exceed the configured memory budget (CLI exit code 3).
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A numerical invariant (trace, Hermiticity, zero initial magic, ...) broke
/// during a run (CLI exit code 4).
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kResource = 3;
inline constexpr int kNumerical = 4;
} // namespace exit_code

} // namespace orqc
