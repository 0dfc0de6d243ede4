#pragma once

#include <stdexcept>
#include <string>

namespace pelvar {

/// Raised when an argument lies outside the mathematical domain of an
/// operation (p outside (0,1), p below the D_X bound, non-positive scale...).
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Raised when a numerical procedure fails to deliver a result
/// (quadrature non-convergence, root bracketing failure, degenerate weights).
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input files or configuration.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pelvar
