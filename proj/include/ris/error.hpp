#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace ris {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument: wrong dimensions, out-of-range parameters,
// degenerate inputs such as z = -z0.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A linear system was too ill-conditioned to trust.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

// (I - Gamma S) is singular: the terminated network resonates.
class ResonanceError : public NumericalError {
 public:
  ResonanceError(const std::string& what, double condition,
                 double smallest_singular_value)
      : NumericalError(what, condition),
        smallest_singular_value_(smallest_singular_value) {}

  double smallest_singular_value() const noexcept {
    return smallest_singular_value_;
  }

 private:
  double smallest_singular_value_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  IoError(const std::string& what, std::string path)
      : Error(what + ": " + path), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ris
