#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace phs {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (negative distance, log of zero...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// Vector or matrix dimensions that do not fit together.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// Parameter combination violating a precondition (e.g. epsilon >= 2 lambda2).
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Mismatched collection sizes (atom counts, species sizes).
class SizeError : public Error {
public:
  using Error::Error;
};

/// Operation requires a different reference frame.
class FrameError : public Error {
public:
  using Error::Error;
};

/// Malformed numerical input (e.g. a non-symmetric matrix handed to a symmetric solver).
class InputError : public Error {
public:
  using Error::Error;
};

/// Implicit stage solver failed to reach its tolerance.
class StepError : public Error {
public:
  StepError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

private:
  double residual_;
};

/// Non-finite state encountered during time stepping.
class DivergenceError : public Error {
public:
  DivergenceError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const noexcept { return step_; }

private:
  std::size_t step_;
};

/// Experiment input that makes the requested quantity meaningless (e.g. two identical
/// ensembles handed to a growth-rate fit).
class DegeneracyError : public Error {
public:
  using Error::Error;
};

/// Configuration rejected by schema validation.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
  using Error::Error;
};

}  // namespace phs
