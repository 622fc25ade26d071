#pragma once

#include <stdexcept>
#include <string>

namespace mhdmg {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A factorization met a zero (or numerically negligible) pivot.
class SingularMatrix : public Error {
 public:
  SingularMatrix(const std::string& what, long position)
      : Error(what), position_(position) {}
  long position() const noexcept { return position_; }

 private:
  long position_;
};

/// Nonlinear iteration did not reach its tolerance.
class NonlinearDivergence : public Error {
 public:
  using Error::Error;
};

/// Krylov iteration stalled or hit its iteration cap inside a Newton step.
class LinearSolverFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mhdmg
