#pragma once

#include <stdexcept>
#include <string>

namespace nhdqpt {

/// Invalid model parameters or violated call preconditions.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation is not defined for this kind of model (e.g. k-dependent loss).
class UnsupportedModelError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// A computation was requested outside its numerical domain.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |E(k)| vanished somewhere: winding number and DQPT table are ill-defined.
class GaplessError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A phase was requested at a zero of the return amplitude.
class CriticalPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// A test point lies (numerically) on the h(k) curve.
class DegenerateGeometryError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Branch continuation could not be resolved after grid refinement.
class InsufficientGridError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Eigenvectors coalesce at an exceptional point.
class ExceptionalPointError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The metric M(t) - 1 stopped being positive definite; m0 is too small.
class WindowExceededError : public DomainError {
 public:
  WindowExceededError(const std::string& what, double minimal_m0)
      : DomainError(what), minimal_m0_(minimal_m0) {}
  double minimal_m0() const noexcept { return minimal_m0_; }

 private:
  double minimal_m0_;
};

/// U(k,t) is numerically singular.
class SingularEvolutionError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Dilated Hamiltonian failed its Hermiticity postcondition.
class HermiticityError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// RK4 norm drift exceeded tolerance.
class StepSizeError : public DomainError {
 public:
  using DomainError::DomainError;
};

}  // namespace nhdqpt
