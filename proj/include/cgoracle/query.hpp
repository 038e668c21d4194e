#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgoracle/database.hpp"
#include "cgoracle/reachability.hpp"

namespace cgoracle {

enum class QueryKind : std::uint8_t { file, source, dest, cutoff, stats, top, reachable };
enum class RenderFormat : std::uint8_t { structured, html };

std::string_view to_string(QueryKind kind);
std::string_view to_string(RenderFormat format);
std::optional<QueryKind> parse_query_kind(std::string_view text);
std::optional<CutoffMode> parse_cutoff_mode(std::string_view text);
std::optional<RenderFormat> parse_render_format(std::string_view text);

struct QueryRequest {
  QueryKind kind = QueryKind::stats;
  std::optional<std::string> subject;        // file, source, dest, cutoff, reachable
  std::optional<std::vector<std::string>> excluded;  // cutoff
  std::optional<CutoffMode> mode;            // cutoff
  std::optional<std::string> target;         // reachable
  std::optional<std::size_t> limit;          // top
  RenderFormat render = RenderFormat::structured;
};

struct QueryResult {
  QueryKind kind = QueryKind::stats;
  std::vector<std::string> answers;
  std::size_t count = 0;
  double elapsed = 0.0;
  std::uint64_t graph_version = 0;
  bool cached = false;
  /// Answers before the cap was applied; equals count unless truncated.
  std::size_t total = 0;
  bool truncated() const { return total > count; }
};

/// Unknown query kind.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Field set does not match the kind. `field()` names the offending field.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& message);
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Throws ValidationError if a field required by the kind is missing or a
/// field foreign to it is present.
void validate(const QueryRequest& req);

/// Builds a request from query parameters (`fn`, `file`, `excluded`,
/// `mode`, `target`, `limit`, `render`). `kind_text` comes from the URL.
/// Throws ProtocolError or ValidationError.
QueryRequest request_from_params(std::string_view kind_text,
                                 const std::multimap<std::string, std::string>& params);

struct QueryOptions {
  std::size_t answer_cap = 100000;
};

/// Runs one query under the database's read lock. Source, dest and cutoff
/// answers are function names sorted ascending; file answers are
/// "caller callee file style" lines sorted ascending; top answers are
/// "name count" in rank order; stats answers are "key value" lines.
QueryResult handle(GraphDatabase& db, const QueryRequest& req, const QueryOptions& options = {});

/// Header line `kind count elapsed version cached [truncated=N]`, then one
/// answer per line.
std::string render_structured(const QueryResult& result);

/// `<h3>` echoing the query followed by a `<ul>` of `<li>` answers.
std::string render_html(const QueryRequest& req, const QueryResult& result);

std::string render(const QueryRequest& req, const QueryResult& result);

/// Body of the header-only structured error reply.
std::string render_error(std::string_view kind, std::string_view message);

/// Splits "a,b,,c" into {"a","b","c"}.
std::vector<std::string> split_list(std::string_view text);

}  // namespace cgoracle
