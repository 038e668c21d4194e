#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cgoracle/call_graph.hpp"

namespace cgoracle {

/// A reachable set, sorted by id.
using ClosureSet = std::vector<FunctionId>;
using ClosureHandle = std::shared_ptr<const ClosureSet>;

enum class Direction : std::uint8_t { forward, backward };

enum class CutoffMode : std::uint8_t {
  filter,   ///< closure minus the excluded names
  barrier,  ///< traversal never expands through an excluded name
};

std::string_view to_string(CutoffMode mode);

/// How neighbor sets are obtained.
enum class LookupStrategy : std::uint8_t {
  indexed,  ///< forward/reverse adjacency indexes
  scan,     ///< one linear pass over the edge list per BFS level
};

struct ClosureOptions {
  LookupStrategy lookup = LookupStrategy::indexed;
  bool caching = true;
};

struct CacheStats {
  std::uint64_t hits = 0;
  std::uint64_t misses = 0;
  std::size_t forward_entries = 0;
  std::size_t backward_entries = 0;
  std::size_t cached_members = 0;
};

/// Memoized transitive closure over a CallGraph.
///
/// Semantics are the least fixpoint of
///   reach(a, b) <- edge(a, b)
///   reach(a, c) <- reach(a, b), reach(b, c)
/// so a node reaches itself only when it lies on a cycle.
///
/// Sets are materialized per source (forward) or per destination (backward)
/// and tagged with the graph version they were built for. Any query made
/// against a different version drops every cached set first. Concurrent
/// queries may compute the same entry; the first insert wins and both return
/// equal sets. The graph must not be mutated while a query runs.
class ClosureEngine {
 public:
  explicit ClosureEngine(const CallGraph& graph, ClosureOptions options = {});

  ClosureHandle forward_closure(FunctionId f);
  ClosureHandle backward_closure(FunctionId f);
  ClosureHandle closure(FunctionId f, Direction dir);

  /// Name-based entry points; unknown names reach nothing.
  ClosureHandle forward_closure(std::string_view name);
  ClosureHandle backward_closure(std::string_view name);

  bool is_reachable(FunctionId from, FunctionId to);
  bool is_reachable(std::string_view from, std::string_view to);

  /// Never cached: the result depends on `excluded`.
  ClosureSet cutoff_closure(FunctionId f, std::span<const FunctionId> excluded, CutoffMode mode);

  /// Number of distinct (a, b) with b reachable from a. Materializes every
  /// forward set when caching is on.
  std::uint64_t closure_edge_count();

  /// The k functions with the most transitive callers, count descending,
  /// name ascending on ties. Functions with no callers are omitted.
  std::vector<std::pair<FunctionId, std::size_t>> top_called(std::size_t k);

  /// Drops every cached set unless `version` matches the cache's version.
  void invalidate(std::uint64_t version);

  /// Whether a set for (f, dir) is cached at the current graph version.
  bool is_cached(FunctionId f, Direction dir) const;

  CacheStats cache_stats() const;
  std::size_t cache_memory_bytes() const;
  const ClosureOptions& options() const { return options_; }
  const CallGraph& graph() const { return *graph_; }

 private:
  using Cache = std::unordered_map<FunctionId, ClosureHandle>;

  ClosureHandle lookup_cached(FunctionId f, Direction dir);
  ClosureHandle store(FunctionId f, Direction dir, ClosureHandle set);
  void sync_version();

  /// BFS from `f`. Cached sets of visited nodes are spliced in when
  /// `splice` is set. Nodes in `blocked` are neither added nor expanded.
  ClosureSet traverse(FunctionId f, Direction dir, bool splice,
                      const std::vector<char>* blocked);
  void expand_frontier(const std::vector<FunctionId>& frontier, Direction dir,
                       std::vector<FunctionId>& out) const;

  /// Post-order over `dir` so that every node's successors come first.
  std::vector<FunctionId> dependency_order(Direction dir) const;

  const CallGraph* graph_;
  ClosureOptions options_;
  mutable std::mutex mutex_;
  Cache forward_;
  Cache backward_;
  std::uint64_t built_for_version_;
  std::uint64_t hits_ = 0;
  std::uint64_t misses_ = 0;
};

}  // namespace cgoracle
