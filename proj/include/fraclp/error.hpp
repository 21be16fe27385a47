#pragma once

#include <stdexcept>
#include <string>

namespace fraclp {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or configuration was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not meet its tolerance. Carries the best
/// estimate reached so callers can report it instead of a silent value.
class QuadratureFailure : public Error {
 public:
  QuadratureFailure(const std::string& what, double best_estimate, double error_estimate)
      : Error(what), best_(best_estimate), error_(error_estimate) {}

  double best_estimate() const noexcept { return best_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double best_;
  double error_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace fraclp
