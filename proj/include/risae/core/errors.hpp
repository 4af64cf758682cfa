#pragma once

#include <stdexcept>
#include <string>

namespace risae {

/// Shape or axis mismatch between tensors/layers. Message names the offending axis.
class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A documented precondition was violated by the caller (e.g. non-unit-modulus phases).
class ContractError : public std::runtime_error {
public:
    explicit ContractError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An enumeration or trial budget would be exceeded.
class BudgetError : public std::runtime_error {
public:
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Stateful component used before it was initialized (e.g. batchnorm inference
/// before any training step populated the running statistics).
class StateError : public std::runtime_error {
public:
    explicit StateError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid or inconsistent experiment configuration. Maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numeric failure mid-run (divergence, non-finite values). Maps to CLI exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace risae
