#ifndef NASHDCF_POLYTEXT_HPP
#define NASHDCF_POLYTEXT_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nashdcf/mpoly.hpp"

namespace nashdcf {

/// Syntax error carrying a 1-based column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : std::runtime_error(what + " at column " + std::to_string(column)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

struct Token {
  enum Kind { kNumber, kIdent, kOp, kString, kEnd } kind;
  std::string text;
  std::size_t column;  // 1-based
};

/// Splits arithmetic text into numbers, identifiers (letters, digits, '_',
/// primes and [k] suffixes are kept together), quoted strings and operators.
std::vector<Token> tokenize(std::string_view text);

/// Parses the canonical polynomial syntax: variables L<k>, Z, g; integer and
/// p/q literals; + - * / ^ and parentheses. Division only by nonzero constants.
MPoly parse_poly(std::string_view text);

}  // namespace nashdcf

#endif
