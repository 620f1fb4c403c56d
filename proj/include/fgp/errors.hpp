#pragma once

#include <stdexcept>
#include <string>

namespace fgp {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Validation failures: bad parameters, out-of-domain arguments, requests a
// family cannot serve. The CLI maps these to exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Point evaluation exactly on a jump locus without a branch choice.
class DiagonalAmbiguityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Evaluation on the diagonal of a kernel that is singular there.
class SingularityError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnsupportedHypothesisError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// An integrand and an integrator share a discontinuity and no branch
/// policy resolves it.
class CommonJumpError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Numeric failures. The CLI maps these to exit code 1.
class NumericError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public NumericError {
 public:
  using NumericError::NumericError;
};

class FactorizationError : public NumericError {
 public:
  using NumericError::NumericError;
};

class DegeneratePathError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace fgp
