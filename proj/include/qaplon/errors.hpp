#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qaplon {

/// Invalid generator or batch configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed instance file or binary artifact. line() is 1-based,
/// 0 when the error is not tied to a single line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what
                                : what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Request exceeds the exhaustive-enumeration guard (n! too large).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qaplon
