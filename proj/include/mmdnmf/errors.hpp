#pragma once

#include <stdexcept>
#include <string>

namespace mmdnmf {

/// Base class of every error thrown by the library. Each subclass names one
/// failure category so callers (and the CLI) can report it precisely.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A configuration value is out of its valid range.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A row/column/sample index is out of range.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// Malformed user input (labels, multiplier vectors, matrix entries).
class InputError : public Error {
 public:
  using Error::Error;
};

/// The optimization problem has no feasible point (e.g. no between-class pairs).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// Instance exceeds what an enumeration routine is allowed to handle.
class ScaleError : public Error {
 public:
  using Error::Error;
};

/// Multipliers are degenerate for the requested update (zero between-mass).
class DegenerateMultiplierError : public Error {
 public:
  using Error::Error;
};

/// An evaluation statistic is undefined for the given input.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// A data cell failed validation; the message names row and column.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The file layout does not match what was expected (header, columns).
class SchemaError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmdnmf
