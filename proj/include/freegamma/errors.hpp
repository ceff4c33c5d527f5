#pragma once

#include <stdexcept>
#include <string>

namespace freegamma {

/// Base class for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on the arguments was violated.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// An iterative method (quadrature, root finder, bracket search) gave up.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Two independent evaluation routes disagreed beyond tolerance.
class CrossCheckFailure : public Error {
 public:
  using Error::Error;
};

/// A slope that is provably positive was observed to be non-positive.
class DegenerateSlope : public Error {
 public:
  using Error::Error;
};

/// A complex argument lies outside the domain of the transform.
class DomainViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace freegamma
