#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cgoracle/call_graph.hpp"
#include "cgoracle/reachability.hpp"

namespace cgoracle {

struct BenchRow {
  std::string query_label;
  std::string indexing_variant;  // "indexed", "scan-only" or "-"
  std::string caching_variant;   // "cache-on", "cache-off" or "-"
  double elapsed = 0.0;
  std::size_t memory_estimate = 0;
  std::uint64_t answer_count = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string target;  // function used for the backward query
};

/// Timed (label) measurement of one closure workload on a fresh engine.
struct ClosureTiming {
  double elapsed = 0.0;
  std::uint64_t answer_count = 0;
  std::uint64_t lookups = 0;
  std::size_t memory_estimate = 0;
};

/// `infoe`: enumerate every name-level edge.
ClosureTiming time_edge_enumeration(const CallGraph& graph, LookupStrategy lookup);
/// `infor`: materialize every forward closure and count reachable pairs.
ClosureTiming time_full_closure(const CallGraph& graph, ClosureOptions options);
/// `q1`: backward closure of `target`, cold then warm on one engine.
std::pair<ClosureTiming, ClosureTiming> time_backward_query(const CallGraph& graph,
                                                            FunctionId target,
                                                            ClosureOptions options);

/// The function with the most direct callers (name ascending on ties), or
/// `kmalloc` when present.
std::optional<FunctionId> default_bench_target(const CallGraph& graph);

/// Runs every query under {indexed, scan-only} x {cache-on, cache-off}.
/// `ingest_seconds`, when set, is reported as the first row.
BenchReport run_bench(const CallGraph& graph, std::optional<double> ingest_seconds,
                      std::optional<FunctionId> target = std::nullopt);

void print_bench(std::ostream& out, const BenchReport& report);

}  // namespace cgoracle
