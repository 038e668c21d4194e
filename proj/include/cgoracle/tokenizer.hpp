#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cgoracle {

enum class TokenKind : std::uint8_t { keyword, punctuation, identifier, quote };

std::string_view to_string(TokenKind kind);

/// One lexeme of an egypt call-graph dump. Lines and columns are 1-based.
struct Token {
  TokenKind kind = TokenKind::punctuation;
  std::string text;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Source position of a lexing or parsing failure.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::uint32_t line, std::uint32_t column, const std::string& message);

  std::uint32_t line() const { return line_; }
  std::uint32_t column() const { return column_; }
  /// Message without the "line:column: " prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::uint32_t line_;
  std::uint32_t column_;
  std::string detail_;
};

/// Splits `text` into tokens.
///
/// Outside double quotes, words are keywords (`digraph`, `callgraph`,
/// `style`, `solid`, `dotted`) or identifiers. Inside quotes every leading
/// underscore becomes its own `_` punctuation token and the remainder of the
/// word (`[A-Za-z0-9][A-Za-z0-9_]*`) is one identifier, so `"__x1"` yields
/// quote, `_`, `_`, identifier `x1`, quote. `-` and `>` are separate
/// punctuation tokens.
///
/// Throws SyntaxError on any byte outside that alphabet.
std::vector<Token> tokenize(std::string_view text);

}  // namespace cgoracle
