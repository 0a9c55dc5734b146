#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adadiff {

/// Shape or block-signature mismatch between operands.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Non-finite value produced or consumed where finiteness is required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Requested combination of options is not supported.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input text; carries the 1-based line number.
struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t line_number)
      : std::runtime_error("line " + std::to_string(line_number) + ": " + msg),
        line(line_number) {}
  std::size_t line;
};

}  // namespace adadiff
