#pragma once

#include <stdexcept>
#include <string>

namespace rtspec {

// Base class for all library errors. The CLI maps subclasses to exit codes:
// config/input -> 2, regime precondition -> 3, numerical failure -> 4.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or malformed configuration input (bad JSON, bad field values).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A quantity was requested outside the regime where it is defined
// (e.g. critical surface tension with a non-positive density jump).
class NotApplicableError : public Error {
 public:
  using Error::Error;
};

// The requested computation requires an unstable regime.
class NotUnstableError : public Error {
 public:
  using Error::Error;
};

// Root bracketing for the growth-rate fixed point failed.
class BracketFailureError : public Error {
 public:
  using Error::Error;
};

// The flattening map is not a diffeomorphism at a sampled point.
class DegenerateJacobianError : public Error {
 public:
  using Error::Error;
};

// Linear-algebra conditioning failure (e.g. large Vandermonde systems).
class IllConditionedError : public Error {
 public:
  using Error::Error;
};

// Generic numerical failure (non-convergence, invalid intermediate value).
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rtspec
