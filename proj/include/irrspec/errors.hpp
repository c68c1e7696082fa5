#pragma once

#include <stdexcept>
#include <string>

namespace irrspec {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or inputs that violate a documented precondition.
// The command-line tool maps these to exit code 2.
class ParameterError : public Error {
 public:
  using Error::Error;
};

// Grid or raster resolution too coarse for the requested computation.
class ResolutionError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// The operation is not defined for this kind of input (e.g. spectral
// synthesis for a model without a finite band).
class UnsupportedError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

// Quadrature, factorization or convergence failures. Exit code 3.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved = 0.0)
      : Error(what), achieved_(achieved) {}

  // Achieved tolerance or the diagnostic value that triggered the error.
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

}  // namespace irrspec
