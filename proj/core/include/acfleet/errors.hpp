#pragma once

#include <stdexcept>
#include <string>

namespace acfleet {

/// Invalid or inconsistent configuration (bad parameter, malformed file, ...).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A numeric computation produced NaN/Inf or left its sanity bounds.
class NonFiniteResult : public std::runtime_error {
 public:
  explicit NonFiniteResult(const std::string& what) : std::runtime_error(what) {}
};

/// Tensor/network operands do not agree in shape.
class ShapeMismatch : public std::runtime_error {
 public:
  explicit ShapeMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Masked softmax received a row with no admissible entry.
class AllMasked : public std::runtime_error {
 public:
  explicit AllMasked(const std::string& what) : std::runtime_error(what) {}
};

/// Checkpoint cannot be deployed against the requested environment.
class IncompatibleCheckpoint : public std::runtime_error {
 public:
  explicit IncompatibleCheckpoint(const std::string& what) : std::runtime_error(what) {}
};

/// A training loss blew past its divergence threshold.
class DivergenceDetected : public std::runtime_error {
 public:
  explicit DivergenceDetected(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace acfleet
