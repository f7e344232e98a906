#pragma once

#include <stdexcept>
#include <string>

namespace twomode {

/// Exit codes used by the CLI: 0 success, 2 config error, 3 numerical
/// error, 4 I/O error.
enum class ErrorCode : int { Config = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }
  int exit_code() const { return static_cast<int>(code_); }

 private:
  ErrorCode code_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
};

class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(ErrorCode::Numerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

// Parameter and configuration failures.
struct NonPositiveFrequencyError : ConfigError { using ConfigError::ConfigError; };
struct NonFiniteInputError : ConfigError { using ConfigError::ConfigError; };
struct ParseError : ConfigError { using ConfigError::ConfigError; };
struct ValidationError : ConfigError { using ConfigError::ConfigError; };
struct UnknownKeyError : ConfigError { using ConfigError::ConfigError; };

// Numerical preconditions and breakdowns.
struct DefectiveModesError : NumericalError { using NumericalError::NumericalError; };
struct DegenerateEigenvectorsError : NumericalError { using NumericalError::NumericalError; };
struct NotSymplecticError : NumericalError { using NumericalError::NumericalError; };
struct NegativeDeterminantError : NumericalError { using NumericalError::NumericalError; };
struct EntropyDomainError : NumericalError { using NumericalError::NumericalError; };
struct CutoffTooSmallError : NumericalError { using NumericalError::NumericalError; };
struct EigendecompositionError : NumericalError { using NumericalError::NumericalError; };
struct InvalidDensityError : NumericalError { using NumericalError::NumericalError; };
struct InsufficientSamplesError : NumericalError { using NumericalError::NumericalError; };
struct NonPositiveValuesError : NumericalError { using NumericalError::NumericalError; };
struct GridTooShortError : NumericalError { using NumericalError::NumericalError; };
struct DomainError : NumericalError { using NumericalError::NumericalError; };
struct OutOfRangeError : NumericalError { using NumericalError::NumericalError; };

}  // namespace twomode
