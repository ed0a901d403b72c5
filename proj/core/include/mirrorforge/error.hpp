#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirrorforge {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Evaluation outside the domain of a function (log of a negative, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inputs that violate a documented precondition (shape, grid or degree mismatch).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class ConvexityError : public Error {
 public:
  using Error::Error;
};

// Newton iteration failed to reach tolerance within its step budget.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

class RamificationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace mirrorforge
