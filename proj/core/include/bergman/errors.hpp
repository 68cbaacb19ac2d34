#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters: p <= 0, alpha <= -1, bad node counts, empty families.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A point argument that is not strictly inside the unit disk.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Non-finite integrand values, root-finder failures and similar.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at a critical point of an analytic self-map.
class CriticalPointError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace bergman
