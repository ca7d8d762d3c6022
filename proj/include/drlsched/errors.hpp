#pragma once

#include <stdexcept>
#include <string>

namespace drlsched {

/// Invalid generator or configuration parameter. The message names the field.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed text input (jobset files, config files).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Inconsistent environment / experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the legal domain (e.g. an out-of-range action index).
class DomainError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Operation not legal in the current state (e.g. slowdown of an unfinished job).
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Non-finite value in parameters or gradients.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Corrupt or truncated checkpoint.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Network or checkpoint shape does not match the expected configuration.
class ShapeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Instance too large for exhaustive search.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

}  // namespace drlsched
