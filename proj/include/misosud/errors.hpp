#pragma once

#include <stdexcept>
#include <string>

namespace misosud {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A constraint set that admits no point (interference cap above what the
// power budget can produce, trace budget exceeded, ...).
class FeasibilityError : public Error {
 public:
  using Error::Error;
};

// Iteration caps, non-convergence, degenerate geometry.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// An operation was called outside the hypotheses it is valid under.
class HypothesisError : public Error {
 public:
  using Error::Error;
};

// No zero-forcing direction exists for some user.
class DegenerateZfError : public NumericalError {
 public:
  DegenerateZfError(std::size_t user, const std::string& what)
      : NumericalError(what), user_(user) {}
  std::size_t user() const { return user_; }

 private:
  std::size_t user_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace misosud
