#pragma once

#include <stdexcept>
#include <string>

namespace retint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input too short or otherwise unusable for the requested computation.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Zero-variance volatility; the stock cannot be normalized.
class DegenerateSeries : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

/// Not enough data points to produce the estimate (too few tail bins, exceedances, ...).
class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// Fitted model has the wrong shape (e.g. non-decaying exponential).
class FitShapeError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

}  // namespace retint
