#pragma once

#include <stdexcept>
#include <string>

namespace geodisc {

// Raised for inputs that violate a documented precondition (bad radius, a
// non-unit vector, weights that do not sum to one, ...). The CLI maps this to
// exit code 1.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// An iterative refinement ran out of iterations before reaching its target.
class ConvergenceError : public DomainError {
 public:
  explicit ConvergenceError(const std::string& what) : DomainError(what) {}
};

// The requested operation has no implementation for this space model
// (e.g. uniform sampling on the octonionic plane).
class UnsupportedError : public DomainError {
 public:
  explicit UnsupportedError(const std::string& what) : DomainError(what) {}
};

}  // namespace geodisc
