#pragma once

#include <stdexcept>
#include <string>

namespace fpopt {

// Fatal pipeline error; the CLI maps it to exit code 1.
class FatalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid configuration; the CLI maps it to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public FatalError {
 public:
  using FatalError::FatalError;
};

// All-zero hourly counts; the domain must not be clustered or assigned.
class UndefinedFingerprint : public FatalError {
 public:
  using FatalError::FatalError;
};

class InsufficientPoints : public FatalError {
 public:
  using FatalError::FatalError;
};

class SilhouetteUndefined : public FatalError {
 public:
  using FatalError::FatalError;
};

class NoModel : public FatalError {
 public:
  using FatalError::FatalError;
};

class EmptyPeriod : public FatalError {
 public:
  using FatalError::FatalError;
};

}  // namespace fpopt
