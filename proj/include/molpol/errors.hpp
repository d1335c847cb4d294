#pragma once

#include <stdexcept>
#include <string>

namespace molpol {

// Base class for everything thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: files, formats, units, configuration. CLI exit code 2.
struct InputError : Error {
  using Error::Error;
};

struct UnitError : InputError {
  using InputError::InputError;
};

struct ParseError : InputError {
  using InputError::InputError;
};

struct ValidationError : InputError {
  using InputError::InputError;
};

struct ConfigError : InputError {
  using InputError::InputError;
};

struct DomainError : InputError {
  using InputError::InputError;
};

// Inconsistent physical data (e.g. excited curve below the ground level).
struct DataError : InputError {
  using InputError::InputError;
};

// Numerical failure at runtime. CLI exit code 1.
struct NumericError : Error {
  using Error::Error;
};

struct FitError : NumericError {
  using NumericError::NumericError;
};

struct OracleError : NumericError {
  using NumericError::NumericError;
};

} // namespace molpol
