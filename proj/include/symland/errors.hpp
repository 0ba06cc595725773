#pragma once

#include <stdexcept>
#include <string>

namespace symland {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape problems: odd dimension, non-square input, mismatched sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input fails a group-membership test (symplectic, orthogonal, unitary).
class StructureError : public Error {
 public:
  StructureError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Singular values could not be matched into reciprocal pairs.
class PairingError : public Error {
 public:
  using Error::Error;
};

/// An index set, stabilizer element or configuration is inconsistent.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Operation called outside its domain (e.g. compact landscape on a
/// non-orthogonal target).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Quadratic form is identically zero; no inertia can be assigned.
class DegenerateFormError : public Error {
 public:
  using Error::Error;
};

}  // namespace symland
