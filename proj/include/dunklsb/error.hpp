#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dunklsb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A root is zero, has the wrong dimension or is otherwise malformed.
class InvalidRootError : public Error {
 public:
  using Error::Error;
};

/// The root set is not closed under its own reflections.
class NotARootSystemError : public Error {
 public:
  NotARootSystemError(const std::string& what, std::vector<double> witness)
      : Error(what), witness_(std::move(witness)) {}
  /// A reflected root that is missing from the set.
  const std::vector<double>& witness() const noexcept { return witness_; }

 private:
  std::vector<double> witness_;
};

/// Reflection group closure exceeded the element cap.
class RunawayClosureError : public Error {
 public:
  using Error::Error;
};

class UnsupportedMultiplicityError : public Error {
 public:
  using Error::Error;
};

class InvalidParameterError : public Error {
 public:
  using Error::Error;
};

/// Requested degree exceeds what a table was built for.
class DegreeRangeError : public Error {
 public:
  using Error::Error;
};

/// A routine that must be exact met a value it cannot represent.
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Numerical target missed; carries the best available value.
class PrecisionFailure : public Error {
 public:
  PrecisionFailure(const std::string& what, std::complex<double> estimate,
                   double error_bound)
      : Error(what), estimate_(estimate), error_bound_(error_bound) {}
  std::complex<double> estimate() const noexcept { return estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  std::complex<double> estimate_;
  double error_bound_;
};

/// An identity that holds by construction was violated.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Gram-Schmidt met a zero Fischer norm.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dunklsb
