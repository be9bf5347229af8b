#pragma once

#include <stdexcept>
#include <string>

namespace ceilfit {

// Every library failure derives from Error so callers (the CLI in particular)
// can map the whole family to a "data/domain" exit code in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A value is outside the documented domain of an operation.
class InputDomainError : public Error {
 public:
  using Error::Error;
};

// Not enough observations for the requested estimate.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

// MAD (or another robust scale) collapsed to zero.
class DegenerateScaleError : public Error {
 public:
  using Error::Error;
};

// Zero variance in one of the inputs to a correlation.
class UndefinedCorrelationError : public Error {
 public:
  using Error::Error;
};

// A cross-argument contract was violated (e.g. RL curve not anchored at P_sft).
class ContractError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. The message names the row/column or key.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Fit artifact written by an incompatible format version.
class VersionError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace ceilfit
