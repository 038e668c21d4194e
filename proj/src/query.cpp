#include "cgoracle/query.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>

namespace cgoracle {
namespace {

constexpr std::size_t kDefaultTopLimit = 10;

std::vector<std::string> sorted_names(const CallGraph& g, const ClosureSet& set) {
  std::vector<std::string> names;
  names.reserve(set.size());
  for (auto f : set) names.emplace_back(g.name(f));
  std::sort(names.begin(), names.end());
  return names;
}

std::string escape_html(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

bool needs_subject(QueryKind k) {
  return k != QueryKind::stats && k != QueryKind::top;
}

}  // namespace

std::string_view to_string(QueryKind kind) {
  switch (kind) {
    case QueryKind::file: return "file";
    case QueryKind::source: return "source";
    case QueryKind::dest: return "dest";
    case QueryKind::cutoff: return "cutoff";
    case QueryKind::stats: return "stats";
    case QueryKind::top: return "top";
    case QueryKind::reachable: return "reachable";
  }
  return "?";
}

std::string_view to_string(RenderFormat format) {
  return format == RenderFormat::html ? "html" : "structured";
}

std::optional<QueryKind> parse_query_kind(std::string_view text) {
  for (auto k : {QueryKind::file, QueryKind::source, QueryKind::dest, QueryKind::cutoff,
                 QueryKind::stats, QueryKind::top, QueryKind::reachable}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

std::optional<CutoffMode> parse_cutoff_mode(std::string_view text) {
  if (text == "filter") return CutoffMode::filter;
  if (text == "barrier") return CutoffMode::barrier;
  return std::nullopt;
}

std::optional<RenderFormat> parse_render_format(std::string_view text) {
  if (text == "structured") return RenderFormat::structured;
  if (text == "html") return RenderFormat::html;
  return std::nullopt;
}

ValidationError::ValidationError(std::string field, const std::string& message)
    : std::runtime_error("invalid field '" + field + "': " + message), field_(std::move(field)) {}

void validate(const QueryRequest& req) {
  const auto kind = std::string(to_string(req.kind));
  auto forbid = [&](bool present, const char* field) {
    if (present) throw ValidationError(field, "not allowed for kind " + kind);
  };
  if (needs_subject(req.kind)) {
    if (!req.subject || req.subject->empty()) {
      throw ValidationError("subject", "required for kind " + kind);
    }
  } else {
    forbid(req.subject.has_value(), "subject");
  }
  const bool cutoff = req.kind == QueryKind::cutoff;
  forbid(!cutoff && req.excluded.has_value(), "excluded");
  forbid(!cutoff && req.mode.has_value(), "mode");
  if (req.kind == QueryKind::reachable) {
    if (!req.target || req.target->empty()) {
      throw ValidationError("target", "required for kind reachable");
    }
  } else {
    forbid(req.target.has_value(), "target");
  }
  if (req.kind == QueryKind::top) {
    if (!req.limit || *req.limit == 0) {
      throw ValidationError("limit", "a positive integer is required for kind top");
    }
  } else {
    forbid(req.limit.has_value(), "limit");
  }
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

QueryRequest request_from_params(std::string_view kind_text,
                                 const std::multimap<std::string, std::string>& params) {
  const auto kind = parse_query_kind(kind_text);
  if (!kind) throw ProtocolError("unknown query kind '" + std::string(kind_text) + "'");
  QueryRequest req;
  req.kind = *kind;
  for (const auto& [key, value] : params) {
    if (params.count(key) > 1) throw ValidationError(key, "given more than once");
    if (key == "fn" || key == "file" || key == "subject") {
      const bool file_kind = req.kind == QueryKind::file;
      if ((key == "fn" && file_kind) || (key == "file" && !file_kind)) {
        throw ValidationError(key, "not allowed for kind " + std::string(kind_text));
      }
      if (req.subject) throw ValidationError(key, "subject given twice");
      req.subject = value;
    } else if (key == "excluded") {
      req.excluded = split_list(value);
    } else if (key == "mode") {
      req.mode = parse_cutoff_mode(value);
      if (!req.mode) throw ValidationError("mode", "expected filter or barrier");
    } else if (key == "target") {
      req.target = value;
    } else if (key == "limit") {
      std::size_t n = 0;
      const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
      if (ec != std::errc() || end != value.data() + value.size()) {
        throw ValidationError("limit", "not a number");
      }
      req.limit = n;
    } else if (key == "render") {
      const auto r = parse_render_format(value);
      if (!r) throw ValidationError("render", "expected structured or html");
      req.render = *r;
    } else {
      throw ValidationError(key, "unknown parameter");
    }
  }
  if (req.kind == QueryKind::top && !req.limit) req.limit = kDefaultTopLimit;
  validate(req);
  return req;
}

QueryResult handle(GraphDatabase& db, const QueryRequest& req, const QueryOptions& options) {
  validate(req);
  const auto start = std::chrono::steady_clock::now();
  QueryResult result;
  result.kind = req.kind;

  db.read([&](const CallGraph& g, ClosureEngine& engine) {
    result.graph_version = g.version();
    const auto subject = g.find_function(req.subject.value_or(""));
    switch (req.kind) {
      case QueryKind::file: {
        for (const auto& e : g.edges_in_file(*req.subject)) {
          std::string line(g.name(e.caller));
          line += ' ';
          line += g.name(e.callee);
          line += ' ';
          line += g.path(e.file);
          line += ' ';
          line += to_string(e.style);
          result.answers.push_back(std::move(line));
        }
        std::sort(result.answers.begin(), result.answers.end());
        break;
      }
      case QueryKind::source:
      case QueryKind::dest: {
        if (!subject) break;
        const auto dir = req.kind == QueryKind::source ? Direction::forward : Direction::backward;
        result.cached = engine.is_cached(*subject, dir);
        result.answers = sorted_names(g, *engine.closure(*subject, dir));
        break;
      }
      case QueryKind::cutoff: {
        if (!subject) break;
        std::vector<FunctionId> excluded;
        for (const auto& name : req.excluded.value_or(std::vector<std::string>{})) {
          if (auto id = g.find_function(name)) excluded.push_back(*id);
        }
        const auto mode = req.mode.value_or(CutoffMode::filter);
        result.cached = (mode == CutoffMode::filter || excluded.empty()) &&
                        engine.is_cached(*subject, Direction::forward);
        result.answers = sorted_names(g, engine.cutoff_closure(*subject, excluded, mode));
        break;
      }
      case QueryKind::stats: {
        const auto s = g.stats();
        result.answers = {"functions " + std::to_string(s.function_count),
                          "files " + std::to_string(s.file_count),
                          "edges " + std::to_string(s.edge_count),
                          "raw_edges " + std::to_string(s.raw_edge_count),
                          "version " + std::to_string(s.version)};
        break;
      }
      case QueryKind::top: {
        for (const auto& [f, n] : engine.top_called(*req.limit)) {
          result.answers.push_back(std::string(g.name(f)) + " " + std::to_string(n));
        }
        break;
      }
      case QueryKind::reachable: {
        const auto target = g.find_function(*req.target);
        bool reachable = false;
        if (subject && target) {
          result.cached = engine.is_cached(*subject, Direction::forward) ||
                          engine.is_cached(*target, Direction::backward);
          reachable = engine.is_reachable(*subject, *target);
        }
        result.answers = {reachable ? "true" : "false"};
        break;
      }
    }
  });

  result.total = result.answers.size();
  if (result.answers.size() > options.answer_cap) result.answers.resize(options.answer_cap);
  result.count = result.answers.size();
  result.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::string render_structured(const QueryResult& result) {
  char elapsed[32];
  std::snprintf(elapsed, sizeof elapsed, "%.6f", result.elapsed);
  std::string out(to_string(result.kind));
  out += ' ';
  out += std::to_string(result.count);
  out += ' ';
  out += elapsed;
  out += ' ';
  out += std::to_string(result.graph_version);
  out += result.cached ? " true" : " false";
  if (result.truncated()) out += " truncated=" + std::to_string(result.total);
  out += '\n';
  for (const auto& a : result.answers) {
    out += a;
    out += '\n';
  }
  return out;
}

std::string render_html(const QueryRequest& req, const QueryResult& result) {
  std::string title(to_string(req.kind));
  if (req.subject) title += " " + *req.subject;
  if (req.target) title += " -> " + *req.target;
  if (req.excluded && !req.excluded->empty()) {
    title += " excluding ";
    for (std::size_t i = 0; i < req.excluded->size(); ++i) {
      if (i) title += ',';
      title += (*req.excluded)[i];
    }
  }
  if (req.kind == QueryKind::cutoff) title += " (" + std::string(to_string(req.mode.value_or(CutoffMode::filter))) + ")";
  if (req.limit) title += " limit " + std::to_string(*req.limit);
  std::string out = "<h3>" + escape_html(title) + " &mdash; " + std::to_string(result.count) +
                    (result.count == 1 ? " answer" : " answers");
  if (result.truncated()) out += " (truncated from " + std::to_string(result.total) + ")";
  out += "</h3>\n<ul>\n";
  for (const auto& a : result.answers) out += "<li>" + escape_html(a) + "</li>\n";
  out += "</ul>\n";
  return out;
}

std::string render(const QueryRequest& req, const QueryResult& result) {
  return req.render == RenderFormat::html ? render_html(req, result) : render_structured(result);
}

std::string render_error(std::string_view kind, std::string_view message) {
  std::string out = "error ";
  out += kind;
  out += '\n';
  out += message;
  out += '\n';
  return out;
}

}  // namespace cgoracle
