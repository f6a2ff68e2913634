#pragma once

#include <stdexcept>
#include <string>

namespace modeforge {

/// Malformed setup, e.g. an empty or duplicated mode registry.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation was called with arguments that violate its contract
/// (registry mismatch, non-Hermitian operator, bad bipartition, ...).
class UsageError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A numeric parameter lies outside the domain of a constructor or formula.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A reduction or post-selection has no support (zero denominator).
class UndefinedReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace modeforge
