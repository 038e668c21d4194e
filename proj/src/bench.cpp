#include "cgoracle/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

namespace cgoracle {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

const char* indexing_label(LookupStrategy s) {
  return s == LookupStrategy::indexed ? "indexed" : "scan-only";
}

}  // namespace

ClosureTiming time_edge_enumeration(const CallGraph& graph, LookupStrategy lookup) {
  ClosureTiming t;
  const auto lookups = graph.lookup_count();
  const auto start = Clock::now();
  if (lookup == LookupStrategy::indexed) {
    for (std::uint32_t i = 0; i < graph.files().size(); ++i) {
      t.answer_count += graph.edges_in_file(FileId{i}).size();
    }
  } else {
    graph.note_lookup();
    t.answer_count = static_cast<std::uint64_t>(
        std::count_if(graph.edges().begin(), graph.edges().end(),
                      [](const CallEdge& e) { return e.multiplicity > 0; }));
  }
  t.elapsed = seconds_since(start);
  t.lookups = graph.lookup_count() - lookups;
  t.memory_estimate = graph.memory_bytes();
  return t;
}

ClosureTiming time_full_closure(const CallGraph& graph, ClosureOptions options) {
  ClosureEngine engine(graph, options);
  ClosureTiming t;
  const auto lookups = graph.lookup_count();
  const auto start = Clock::now();
  t.answer_count = engine.closure_edge_count();
  t.elapsed = seconds_since(start);
  t.lookups = graph.lookup_count() - lookups;
  t.memory_estimate = graph.memory_bytes() + engine.cache_memory_bytes();
  return t;
}

std::pair<ClosureTiming, ClosureTiming> time_backward_query(const CallGraph& graph,
                                                            FunctionId target,
                                                            ClosureOptions options) {
  ClosureEngine engine(graph, options);
  auto run = [&] {
    ClosureTiming t;
    const auto lookups = graph.lookup_count();
    const auto start = Clock::now();
    t.answer_count = engine.backward_closure(target)->size();
    t.elapsed = seconds_since(start);
    t.lookups = graph.lookup_count() - lookups;
    t.memory_estimate = graph.memory_bytes() + engine.cache_memory_bytes();
    return t;
  };
  ClosureTiming cold = run();
  ClosureTiming warm = run();
  return {cold, warm};
}

std::optional<FunctionId> default_bench_target(const CallGraph& graph) {
  if (auto k = graph.find_function("kmalloc")) return k;
  std::optional<FunctionId> best;
  std::size_t best_callers = 0;
  for (std::uint32_t i = 0; i < graph.function_count(); ++i) {
    const FunctionId f{i};
    const auto n = graph.callers_of(f).size();
    if (!best || n > best_callers || (n == best_callers && graph.name(f) < graph.name(*best))) {
      best = f;
      best_callers = n;
    }
  }
  return best;
}

BenchReport run_bench(const CallGraph& graph, std::optional<double> ingest_seconds,
                      std::optional<FunctionId> target) {
  BenchReport report;
  if (ingest_seconds) {
    report.rows.push_back(BenchRow{"parse", "-", "-", *ingest_seconds, graph.memory_bytes(),
                                   graph.raw_edge_count()});
  }
  if (!target) target = default_bench_target(graph);
  if (target) report.target = std::string(graph.name(*target));

  auto add = [&](std::string label, const ClosureOptions& o, const ClosureTiming& t) {
    report.rows.push_back(BenchRow{std::move(label), indexing_label(o.lookup),
                                   o.caching ? "cache-on" : "cache-off", t.elapsed,
                                   t.memory_estimate, t.answer_count});
  };

  for (auto lookup : {LookupStrategy::indexed, LookupStrategy::scan}) {
    for (bool caching : {true, false}) {
      const ClosureOptions o{lookup, caching};
      add("infoe", o, time_edge_enumeration(graph, lookup));
      add("infor", o, time_full_closure(graph, o));
      if (target) {
        const auto [cold, warm] = time_backward_query(graph, *target, o);
        add("q1-cold", o, cold);
        add("q1-warm", o, warm);
      }
    }
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const BenchRow& a, const BenchRow& b) {
                     auto rank = [](const std::string& l) {
                       if (l == "parse") return 0;
                       if (l == "infoe") return 1;
                       if (l == "infor") return 2;
                       return l == "q1-cold" ? 3 : 4;
                     };
                     return rank(a.query_label) < rank(b.query_label);
                   });
  return report;
}

void print_bench(std::ostream& out, const BenchReport& report) {
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %-10s %-9s %12s %14s %12s\n", "query", "indexing",
                "caching", "elapsed_s", "memory_bytes", "answers");
  out << line;
  for (const auto& r : report.rows) {
    std::snprintf(line, sizeof line, "%-8s %-10s %-9s %12.6f %14zu %12llu\n",
                  r.query_label.c_str(), r.indexing_variant.c_str(), r.caching_variant.c_str(),
                  r.elapsed, r.memory_estimate, static_cast<unsigned long long>(r.answer_count));
    out << line;
  }
  if (!report.target.empty()) out << "q1 target: " << report.target << "\n";
}

}  // namespace cgoracle
