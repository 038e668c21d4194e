#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cgoracle/tokenizer.hpp"

namespace cgoracle {

enum class EdgeStyle : std::uint8_t { unspecified = 0, solid = 1, dotted = 2 };

std::string_view to_string(EdgeStyle style);

/// An edge exactly as read from one dump file.
struct RawEdge {
  std::string source;
  std::string dest;
  EdgeStyle style = EdgeStyle::unspecified;
  std::string file;

  friend bool operator==(const RawEdge&, const RawEdge&) = default;
};

struct ParseOutcome {
  std::vector<RawEdge> edges;
  /// Edges that were not followed by a `[style=...];` descriptor.
  std::size_t missing_style = 0;
};

/// Parses the egypt dot subset:
///
///   graph       := 'digraph' 'callgraph' '{' graph_descr '}'
///   graph_descr := id ';' graph_descr
///                | id '-' '>' id [style_descr] graph_descr
///                | style_descr graph_descr
///                | (empty)
///   style_descr := '[' 'style' '=' ('solid' | 'dotted') ']' ';'
///   id          := '"' '_'* ident '"'
///
/// Every edge is stamped with `file`. Throws SyntaxError at the first token
/// that cannot extend a valid prefix (or at the end of input).
ParseOutcome parse_eg(std::span<const Token> tokens, std::string_view file);

/// Convenience: tokenize + parse.
ParseOutcome parse_eg_text(std::string_view text, std::string_view file);

/// Writes edges back in the concrete syntax accepted by parse_eg. The file
/// tag is not part of the syntax; re-parse with the same tag to round-trip.
std::string format_eg(std::span<const RawEdge> edges);

/// True if `name` is a valid function identifier: `_*[A-Za-z0-9][A-Za-z0-9_]*`.
bool is_valid_function_name(std::string_view name);

}  // namespace cgoracle
