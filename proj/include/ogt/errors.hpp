#pragma once

#include <stdexcept>
#include <string>

namespace ogt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed or out-of-contract input.
class InputError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "input"; }
};

/// An exhaustive routine was asked to go beyond its enumeration cap.
class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

/// A postcondition that the construction guarantees did not hold.
class InternalError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "internal"; }
};

/// Failure inside a multi-stage pipeline, tagged with the stage name.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& what, std::string inner_kind = "error")
      : Error(stage + ": " + what), stage_(std::move(stage)), inner_kind_(std::move(inner_kind)) {}
  const char* kind() const noexcept override { return "stage"; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& inner_kind() const noexcept { return inner_kind_; }

 private:
  std::string stage_;
  std::string inner_kind_;
};

}  // namespace ogt
