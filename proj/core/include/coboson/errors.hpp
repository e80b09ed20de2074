#pragma once

#include <stdexcept>
#include <string>

namespace coboson {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or inconsistent profile data (bad weights, normalization off).
class ProfileError : public Error {
 public:
  using Error::Error;
};

/// Requested a moment of a Pauli-blocked state (F_N = 0, the state vanishes).
class BlockedStateError : public Error {
 public:
  using Error::Error;
};

/// Float-mode result would be dominated by rounding/cancellation noise.
class PrecisionDomainError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Invalid run configuration (CLI or programmatic).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace coboson
