#pragma once

#include <stdexcept>
#include <string>

namespace fepinn {

/// Invalid or inconsistent experiment configuration (maps to CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A derivative was requested that the evaluation pipeline does not track
/// (e.g. a y-derivative of a one-dimensional model).
class UnsupportedDerivative : public std::logic_error {
public:
  explicit UnsupportedDerivative(const std::string& what) : std::logic_error(what) {}
};

/// A reference evaluation was requested for a problem whose reference is a
/// precomputed grid that has not been built or loaded.
class MissingOracle : public std::runtime_error {
public:
  explicit MissingOracle(const std::string& what) : std::runtime_error(what) {}
};

/// An oracle build failed its self-convergence check.
class OracleConvergenceFailure : public std::runtime_error {
public:
  explicit OracleConvergenceFailure(const std::string& what) : std::runtime_error(what) {}
};

/// Degenerate kernel traces in the adaptive-weight update.
class ZeroTraceError : public std::runtime_error {
public:
  explicit ZeroTraceError(const std::string& what) : std::runtime_error(what) {}
};

/// Non-finite value encountered where the caller requires finiteness.
class NonFiniteError : public std::runtime_error {
public:
  explicit NonFiniteError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fepinn
