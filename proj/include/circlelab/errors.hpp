#pragma once

#include <stdexcept>
#include <string>

namespace circlelab {

// Base of all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
  virtual int exit_code() const noexcept { return 1; }
};

// Invalid input geometry or parameters.
class DomainError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
  int exit_code() const noexcept override { return 1; }
};

// An iterative method failed to reach its tolerance or lost conditioning.
class NumericalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "numerical"; }
  int exit_code() const noexcept override { return 2; }
};

class IoError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "io"; }
  int exit_code() const noexcept override { return 3; }
};

}  // namespace circlelab
