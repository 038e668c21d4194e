#include "cli.hpp"

#include <CLI11.hpp>
#include <signal.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <optional>
#include <thread>

#include <unistd.h>

#include "cgoracle/bench.hpp"
#include "cgoracle/database.hpp"
#include "cgoracle/query.hpp"
#include "cgoracle/server.hpp"
#include "cgoracle/snapshot.hpp"
#include "cgoracle/synthetic.hpp"

namespace cgoracle::cli {
namespace {

namespace fs = std::filesystem;

/// Raised for bad flag combinations discovered after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GraphSource {
  std::string ingest_dir;
  std::string snapshot;
  std::string mode = "skip";
};

void add_source_flags(CLI::App* cmd, GraphSource& src) {
  cmd->add_option("--ingest", src.ingest_dir, "Directory of .eg/.dot dumps to ingest");
  cmd->add_option("--snapshot", src.snapshot, "Snapshot file to load first");
}

IngestMode ingest_mode(const std::string& text) {
  if (text == "strict") return IngestMode::strict;
  if (text == "skip") return IngestMode::skip;
  throw UsageError("--mode must be strict or skip");
}

void print_report(std::ostream& out, const IngestReport& r) {
  out << "files_attempted " << r.files_attempted << "\n"
      << "files_parsed " << r.files_parsed << "\n"
      << "edges_emitted " << r.edges_emitted << "\n"
      << "duplicate_edges " << r.duplicate_edges << "\n"
      << "missing_style " << r.missing_style << "\n"
      << "parse_errors " << r.parse_errors.size() << "\n"
      << "elapsed " << r.elapsed << "\n";
  for (const auto& e : r.parse_errors) {
    out << "error " << e.file << ":" << e.line << ":" << e.column << ": " << e.message << "\n";
  }
}

/// Loads `--snapshot` then applies `--ingest` on top. Returns the ingest
/// report when an ingest ran.
std::optional<IngestReport> load_graph(GraphDatabase& db, const GraphSource& src,
                                       std::ostream& err) {
  if (src.snapshot.empty() && src.ingest_dir.empty()) {
    throw UsageError("no graph loaded: pass --snapshot FILE and/or --ingest DIR");
  }
  if (!src.snapshot.empty()) db.load(src.snapshot);
  if (src.ingest_dir.empty()) return std::nullopt;
  auto report = db.ingest(src.ingest_dir, ingest_mode(src.mode));
  for (const auto& e : report.parse_errors) {
    err << "warning: skipped " << e.file << ":" << e.line << ":" << e.column << ": " << e.message
        << "\n";
  }
  return report;
}

int serve_until_signal(QueryServer& server, std::ostream& err) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);

  std::atomic<bool> done{false};
  std::thread watcher([&] {
    const timespec tick{0, 200'000'000};
    while (!done) {
      if (sigtimedwait(&signals, nullptr, &tick) > 0) {
        err << "shutting down\n";
        server.stop();
        return;
      }
    }
  });
  server.listen();
  done = true;
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Call-graph dependency oracle"};
  app.require_subcommand(1);

  // ingest
  GraphSource ingest_src;
  std::string ingest_save;
  auto* ingest = app.add_subcommand("ingest", "Parse a directory of call-graph dumps");
  ingest->add_option("dir", ingest_src.ingest_dir, "Input directory")->required();
  ingest->add_option("--mode", ingest_src.mode, "strict|skip")
      ->check(CLI::IsMember({"strict", "skip"}));
  ingest->add_option("--save", ingest_save, "Write a snapshot after ingesting");

  // query
  GraphSource query_src;
  std::string query_kind;
  std::vector<std::string> query_args;
  std::string excluded;
  std::string cutoff_mode;
  std::string render_text = "structured";
  std::optional<std::size_t> limit;
  std::size_t answer_cap = QueryOptions{}.answer_cap;
  auto* query = app.add_subcommand("query", "Run one query");
  query->add_option("kind", query_kind, "file|source|dest|cutoff|stats|top|reachable")
      ->required();
  query->add_option("args", query_args, "Subject (and target for reachable)");
  add_source_flags(query, query_src);
  query->add_option("--mode", query_src.mode,
                    "Ingest mode (strict|skip) or cutoff mode (filter|barrier)")
      ->check(CLI::IsMember({"strict", "skip", "filter", "barrier"}));
  query->add_option("--excluded", excluded, "Comma-separated cut-off set");
  query->add_option("--cutoff-mode", cutoff_mode, "filter|barrier")
      ->check(CLI::IsMember({"filter", "barrier"}));
  query->add_option("--render", render_text, "structured|html")
      ->check(CLI::IsMember({"structured", "html"}));
  query->add_option("--limit", limit, "Number of results for top");
  query->add_option("--answer-cap", answer_cap, "Truncate answers beyond this many");

  // snapshot
  GraphSource snap_src;
  std::string snap_action;
  std::string snap_path;
  auto* snapshot = app.add_subcommand("snapshot", "Save or inspect a snapshot");
  snapshot->add_option("action", snap_action, "save|load")
      ->required()
      ->check(CLI::IsMember({"save", "load"}));
  snapshot->add_option("path", snap_path, "Snapshot file")->required();
  snapshot->add_option("--ingest", snap_src.ingest_dir, "Directory to ingest before saving");
  snapshot->add_option("--mode", snap_src.mode, "strict|skip")
      ->check(CLI::IsMember({"strict", "skip"}));

  // serve
  GraphSource serve_src;
  std::string addr = "127.0.0.1";
  int port = 8080;
  std::size_t serve_cap = QueryOptions{}.answer_cap;
  auto* serve = app.add_subcommand("serve", "Run the HTTP query server");
  add_source_flags(serve, serve_src);
  serve->add_option("--mode", serve_src.mode, "strict|skip")
      ->check(CLI::IsMember({"strict", "skip"}));
  serve->add_option("--addr", addr, "Bind address");
  serve->add_option("--port", port, "Port (0 picks one)");
  serve->add_option("--answer-cap", serve_cap, "Truncate answers beyond this many");

  // bench
  GraphSource bench_src;
  std::size_t scale = 50000;
  std::uint64_t seed = 1;
  std::string bench_target;
  auto* bench = app.add_subcommand("bench", "Time parse and closure workloads");
  add_source_flags(bench, bench_src);
  bench->add_option("--scale", scale, "Edge count of the synthetic graph");
  bench->add_option("--seed", seed, "Synthetic generator seed");
  bench->add_option("--target", bench_target, "Function for the backward query");

  // generate
  std::string gen_dir;
  std::size_t gen_scale = 50000;
  std::size_t gen_files = 1000;
  std::uint64_t gen_seed = 1;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dump corpus");
  generate->add_option("dir", gen_dir, "Output directory")->required();
  generate->add_option("--scale", gen_scale, "Total edges");
  generate->add_option("--files", gen_files, "Number of .eg files");
  generate->add_option("--seed", gen_seed, "Generator seed");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*ingest) {
      GraphDatabase db;
      const auto report = db.ingest(ingest_src.ingest_dir, ingest_mode(ingest_src.mode));
      print_report(out, report);
      if (!ingest_save.empty()) db.save(ingest_save);
      return kExitOk;
    }

    if (*query) {
      QueryRequest req;
      const auto kind = parse_query_kind(query_kind);
      if (!kind) throw UsageError("unknown query kind '" + query_kind + "'");
      req.kind = *kind;
      GraphSource src = query_src;
      std::optional<CutoffMode> mode;
      if (!cutoff_mode.empty()) mode = parse_cutoff_mode(cutoff_mode);
      if (src.mode == "filter" || src.mode == "barrier") {
        mode = parse_cutoff_mode(src.mode);
        src.mode = "skip";
      }
      const std::size_t positional = req.kind == QueryKind::reachable ? 2
                                     : (req.kind == QueryKind::stats || req.kind == QueryKind::top)
                                         ? 0
                                         : 1;
      if (query_args.size() != positional) {
        throw UsageError("query " + query_kind + " takes " + std::to_string(positional) +
                         " positional argument(s)");
      }
      if (positional >= 1) req.subject = query_args[0];
      if (positional == 2) req.target = query_args[1];
      if (req.kind == QueryKind::cutoff) {
        req.excluded = split_list(excluded);
        req.mode = mode.value_or(CutoffMode::filter);
      } else if (!excluded.empty() || !cutoff_mode.empty() || mode) {
        throw UsageError("--excluded and cut-off modes apply only to cutoff queries");
      }
      if (req.kind == QueryKind::top) {
        req.limit = limit.value_or(10);
      } else if (limit) {
        throw UsageError("--limit applies only to top queries");
      }
      req.render = *parse_render_format(render_text);
      validate(req);

      GraphDatabase db;
      load_graph(db, src, err);
      const auto result = handle(db, req, QueryOptions{answer_cap});
      out << render(req, result);
      return kExitOk;
    }

    if (*snapshot) {
      GraphDatabase db;
      if (snap_action == "save") {
        if (snap_src.ingest_dir.empty()) throw UsageError("snapshot save needs --ingest DIR");
        load_graph(db, snap_src, err);
        db.save(snap_path);
      } else {
        db.load(snap_path);
      }
      const auto s = db.stats();
      out << "functions " << s.function_count << "\n"
          << "files " << s.file_count << "\n"
          << "edges " << s.edge_count << "\n"
          << "raw_edges " << s.raw_edge_count << "\n";
      return kExitOk;
    }

    if (*serve) {
      GraphDatabase db;
      if (!serve_src.snapshot.empty() || !serve_src.ingest_dir.empty()) {
        load_graph(db, serve_src, err);
      }
      QueryServer server(db, ServerOptions{QueryOptions{serve_cap}});
      int bound = 0;
      try {
        bound = server.bind(addr, port);
      } catch (const ServerError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
      }
      out << "listening on " << addr << ":" << bound << std::endl;
      return serve_until_signal(server, err);
    }

    if (*bench) {
      GraphDatabase db;
      std::optional<double> ingest_seconds;
      std::optional<fs::path> scratch;
      GraphSource src = bench_src;
      if (src.snapshot.empty() && src.ingest_dir.empty()) {
        SyntheticSpec spec;
        spec.edges = scale;
        spec.seed = seed;
        spec.files = std::max<std::size_t>(1, scale / 50);
        scratch = fs::temp_directory_path() /
                  ("cgoracle-bench-" + std::to_string(::getpid()) + "-" + std::to_string(seed));
        fs::remove_all(*scratch);
        write_dump_files(*scratch, generate_call_graph(spec));
        src.ingest_dir = scratch->string();
        out << "synthetic graph: " << scale << " edges, seed " << seed << "\n";
      }
      if (auto report = load_graph(db, src, err)) ingest_seconds = report->elapsed;
      if (scratch) fs::remove_all(*scratch);
      const auto report = db.read([&](const CallGraph& g, ClosureEngine&) {
        std::optional<FunctionId> target;
        if (!bench_target.empty()) {
          target = g.find_function(bench_target);
          if (!target) throw UsageError("unknown --target function '" + bench_target + "'");
        }
        return run_bench(g, ingest_seconds, target);
      });
      print_bench(out, report);
      return kExitOk;
    }

    if (*generate) {
      SyntheticSpec spec;
      spec.edges = gen_scale;
      spec.files = gen_files;
      spec.seed = gen_seed;
      const auto written = write_dump_files(gen_dir, generate_call_graph(spec));
      out << "wrote " << written << " files, " << gen_scale << " edges\n";
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}

}  // namespace cgoracle::cli
