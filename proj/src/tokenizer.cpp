#include "cgoracle/tokenizer.hpp"

#include <array>

namespace cgoracle {
namespace {

constexpr std::array<std::string_view, 5> kKeywords = {"digraph", "callgraph", "style", "solid",
                                                       "dotted"};

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
bool is_word(char c) { return is_alnum(c) || c == '_'; }

bool is_punctuation(char c) {
  switch (c) {
    case '{': case '}': case ';': case '-': case '>':
    case '[': case ']': case '=':
      return true;
    default:
      return false;
  }
}

std::string describe(char c) {
  const auto byte = static_cast<unsigned char>(c);
  if (byte >= 0x20 && byte < 0x7f) return std::string("'") + c + "'";
  static constexpr char kHex[] = "0123456789abcdef";
  return std::string("byte 0x") + kHex[byte >> 4] + kHex[byte & 0xf];
}

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::keyword: return "keyword";
    case TokenKind::punctuation: return "punctuation";
    case TokenKind::identifier: return "identifier";
    case TokenKind::quote: return "quote";
  }
  return "?";
}

SyntaxError::SyntaxError(std::uint32_t line, std::uint32_t column, const std::string& message)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
      line_(line),
      column_(column),
      detail_(message) {}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  tokens.reserve(text.size() / 4);
  std::uint32_t line = 1;
  std::uint32_t column = 1;
  bool in_quotes = false;
  std::size_t i = 0;

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    tokens.push_back(Token{kind, std::string(text.substr(begin, end - begin)), line,
                           static_cast<std::uint32_t>(column)});
    column += static_cast<std::uint32_t>(end - begin);
  };

  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      column = 1;
      ++i;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++column;
      ++i;
    } else if (c == '"') {
      push(TokenKind::quote, i, i + 1);
      in_quotes = !in_quotes;
      ++i;
    } else if (in_quotes && c == '_') {
      push(TokenKind::punctuation, i, i + 1);
      ++i;
    } else if (in_quotes && is_alnum(c)) {
      std::size_t end = i + 1;
      while (end < text.size() && is_word(text[end])) ++end;
      push(TokenKind::identifier, i, end);
      i = end;
    } else if (!in_quotes && is_word(c)) {
      std::size_t end = i + 1;
      while (end < text.size() && is_word(text[end])) ++end;
      const auto word = text.substr(i, end - i);
      bool keyword = false;
      for (auto k : kKeywords) keyword = keyword || k == word;
      push(keyword ? TokenKind::keyword : TokenKind::identifier, i, end);
      i = end;
    } else if (!in_quotes && is_punctuation(c)) {
      push(TokenKind::punctuation, i, i + 1);
      ++i;
    } else {
      throw SyntaxError(line, column,
                        "unrecognized character " + describe(c) +
                            (in_quotes ? " in quoted identifier" : ""));
    }
  }
  return tokens;
}

}  // namespace cgoracle
