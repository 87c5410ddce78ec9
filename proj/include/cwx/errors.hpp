#pragma once

#include <stdexcept>
#include <string>

namespace cwx {

/// A precondition on the arguments of an operation was violated.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A point lies outside the domain where a chart or coordinate change is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction parameter set fails one of the geometric containment gates.
class GeometryGateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Nearest-lift unwrapping of a pseudo-orbit became ambiguous.
class UnwrapError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Chain refinement exceeded its point budget.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(const std::string& what, int step)
      : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

  int step() const noexcept { return step_; }

 private:
  int step_;
};

}  // namespace cwx
