#include "cgoracle/eg_format.hpp"

namespace cgoracle {
namespace {

class Parser {
 public:
  Parser(std::span<const Token> tokens, std::string_view file) : tokens_(tokens), file_(file) {}

  ParseOutcome run() {
    expect(TokenKind::keyword, "digraph");
    expect(TokenKind::keyword, "callgraph");
    expect(TokenKind::punctuation, "{");
    while (!at(TokenKind::punctuation, "}")) {
      if (at(TokenKind::quote, "\"")) {
        statement();
      } else if (at(TokenKind::punctuation, "[")) {
        style_descr();
      } else {
        fail("expected '\"', '[' or '}'");
      }
    }
    ++pos_;
    if (pos_ != tokens_.size()) fail("expected end of input after '}'");
    return std::move(out_);
  }

 private:
  bool at(TokenKind kind, std::string_view text) const {
    return pos_ < tokens_.size() && tokens_[pos_].kind == kind && tokens_[pos_].text == text;
  }

  [[noreturn]] void fail(const std::string& what) const {
    if (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      throw SyntaxError(t.line, t.column, what + ", found '" + t.text + "'");
    }
    std::uint32_t line = 1;
    std::uint32_t column = 1;
    if (!tokens_.empty()) {
      line = tokens_.back().line;
      column = tokens_.back().column + static_cast<std::uint32_t>(tokens_.back().text.size());
    }
    throw SyntaxError(line, column, what + ", found end of input");
  }

  void expect(TokenKind kind, std::string_view text) {
    if (!at(kind, text)) fail("expected '" + std::string(text) + "'");
    ++pos_;
  }

  std::string identifier() {
    expect(TokenKind::quote, "\"");
    std::string name;
    while (at(TokenKind::punctuation, "_")) {
      name += '_';
      ++pos_;
    }
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != TokenKind::identifier) {
      fail("expected identifier");
    }
    name += tokens_[pos_++].text;
    expect(TokenKind::quote, "\"");
    return name;
  }

  void statement() {
    std::string source = identifier();
    if (at(TokenKind::punctuation, ";")) {
      ++pos_;
      return;
    }
    if (!at(TokenKind::punctuation, "-")) fail("expected ';' or '->'");
    ++pos_;
    expect(TokenKind::punctuation, ">");
    std::string dest = identifier();
    EdgeStyle style = EdgeStyle::unspecified;
    if (at(TokenKind::punctuation, "[")) {
      style = style_descr();
    } else {
      ++out_.missing_style;
    }
    out_.edges.push_back(RawEdge{std::move(source), std::move(dest), style, std::string(file_)});
  }

  EdgeStyle style_descr() {
    expect(TokenKind::punctuation, "[");
    expect(TokenKind::keyword, "style");
    expect(TokenKind::punctuation, "=");
    EdgeStyle style;
    if (at(TokenKind::keyword, "solid")) {
      style = EdgeStyle::solid;
    } else if (at(TokenKind::keyword, "dotted")) {
      style = EdgeStyle::dotted;
    } else {
      fail("expected 'solid' or 'dotted'");
    }
    ++pos_;
    expect(TokenKind::punctuation, "]");
    expect(TokenKind::punctuation, ";");
    return style;
  }

  std::span<const Token> tokens_;
  std::string_view file_;
  std::size_t pos_ = 0;
  ParseOutcome out_;
};

}  // namespace

std::string_view to_string(EdgeStyle style) {
  switch (style) {
    case EdgeStyle::unspecified: return "unspecified";
    case EdgeStyle::solid: return "solid";
    case EdgeStyle::dotted: return "dotted";
  }
  return "?";
}

ParseOutcome parse_eg(std::span<const Token> tokens, std::string_view file) {
  return Parser(tokens, file).run();
}

ParseOutcome parse_eg_text(std::string_view text, std::string_view file) {
  const auto tokens = tokenize(text);
  return parse_eg(tokens, file);
}

std::string format_eg(std::span<const RawEdge> edges) {
  std::string out = "digraph callgraph {\n";
  for (const auto& e : edges) {
    out += '"';
    out += e.source;
    out += "\" -> \"";
    out += e.dest;
    out += '"';
    if (e.style != EdgeStyle::unspecified) {
      out += " [style=";
      out += to_string(e.style);
      out += "];";
    }
    out += '\n';
  }
  out += "}\n";
  return out;
}

bool is_valid_function_name(std::string_view name) {
  std::size_t i = 0;
  while (i < name.size() && name[i] == '_') ++i;
  if (i == name.size()) return false;
  auto alnum = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
  };
  if (!alnum(name[i])) return false;
  for (++i; i < name.size(); ++i) {
    if (!alnum(name[i]) && name[i] != '_') return false;
  }
  return true;
}

}  // namespace cgoracle
