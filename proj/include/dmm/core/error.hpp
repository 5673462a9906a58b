#pragma once

#include <stdexcept>
#include <string>

namespace dmm {

// Base for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments to a pure operation (non-finite values, out-of-range u, shape mismatch).
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// Sequence shorter than a full window with padding disabled.
class TooShortError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Ingestion, sampling, split, or file-format problems.
class DataError : public Error {
 public:
  using Error::Error;
};

// Missing bundle components, inconsistent model configs, unmet stage dependencies.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Training could not proceed (too few classes, degenerate labels).
class TrainingError : public Error {
 public:
  using Error::Error;
};

// Filesystem / serialization failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmm
