#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace milnor {

/// A mathematically invalid request: zero where a unit is required, operands
/// from different fields, a place that does not exist, and so on.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Syntax error in the expression language; carries the byte offset.
class ParseError : public std::invalid_argument {
 public:
  ParseError(const std::string& what, std::size_t pos)
      : std::invalid_argument(what + " at position " + std::to_string(pos)), pos_(pos) {}

  std::size_t position() const noexcept { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace milnor
