#pragma once

#include <stdexcept>
#include <string>

namespace bzcert {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, int stage = 0)
      : std::runtime_error(what), stage_(stage) {}

  /// Construction stage the error is attributed to (0 when not stage-specific).
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

/// An operation was called outside its mathematical domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A certificate could not be established at the current working precision.
class PrecisionExhausted : public Error {
 public:
  using Error::Error;
};

/// A certified quantity contradicts what the construction promises.
class CertificationFailure : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace bzcert
