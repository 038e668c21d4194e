#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cgoracle/eg_format.hpp"
#include "cgoracle/symbol_table.hpp"

namespace cgoracle {

/// A deduplicated call fact. (caller, callee, file, style) is unique within a
/// CallGraph; repeated facts bump `multiplicity`.
struct CallEdge {
  FunctionId caller;
  FunctionId callee;
  FileId file;
  EdgeStyle style = EdgeStyle::unspecified;
  std::uint32_t multiplicity = 1;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

struct AddResult {
  std::size_t added = 0;
  std::size_t duplicates = 0;
};

struct GraphStats {
  std::size_t function_count = 0;
  std::size_t file_count = 0;
  std::size_t edge_count = 0;
  std::uint64_t raw_edge_count = 0;
  std::uint64_t version = 0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

/// Interned call-graph store with forward, reverse and per-file indexes.
///
/// Nodes are bare function names: the same name in two files is one node.
/// Not internally synchronized; GraphDatabase provides the reader/writer
/// discipline. Lookup methods bump a relaxed counter so callers can assert
/// that memoized paths do not touch the store.
class CallGraph {
 public:
  CallGraph() = default;
  CallGraph(const CallGraph& other);
  CallGraph& operator=(const CallGraph& other);
  CallGraph(CallGraph&& other) noexcept;
  CallGraph& operator=(CallGraph&& other) noexcept;

  /// Applies one mutation batch; bumps version exactly once, even when empty.
  AddResult add_edges(std::span<const RawEdge> batch);

  /// Name-level neighbors, unique, in first-seen order. Unknown ids give
  /// an empty span.
  std::span<const FunctionId> callees_of(FunctionId f) const;
  std::span<const FunctionId> callers_of(FunctionId f) const;

  /// Name-based conveniences; unknown names give empty results.
  std::vector<FunctionId> callees_of(std::string_view name) const;
  std::vector<FunctionId> callers_of(std::string_view name) const;

  /// Edges whose call site lies in `file`, in insertion order.
  std::vector<CallEdge> edges_in_file(FileId file) const;
  std::vector<CallEdge> edges_in_file(std::string_view path) const;

  const std::vector<CallEdge>& edges() const { return edges_; }

  std::optional<FunctionId> find_function(std::string_view name) const {
    return functions_.find(name);
  }
  std::optional<FileId> find_file(std::string_view path) const { return files_.find(path); }
  std::string_view name(FunctionId f) const { return functions_.text(f); }
  std::string_view path(FileId f) const { return files_.text(f); }

  const SymbolTable<FunctionId>& functions() const { return functions_; }
  const SymbolTable<FileId>& files() const { return files_; }

  std::size_t function_count() const { return functions_.size(); }
  std::uint64_t version() const { return version_; }
  std::uint64_t raw_edge_count() const { return raw_edge_count_; }
  GraphStats stats() const;

  /// Number of index or scan lookups served since construction.
  std::uint64_t lookup_count() const { return lookups_.load(std::memory_order_relaxed); }
  /// Records one store access made outside the indexed accessors (scan paths).
  void note_lookup() const { lookups_.fetch_add(1, std::memory_order_relaxed); }

  /// Raises the version to at least `floor` + 1; used when a reloaded graph
  /// replaces a live one.
  void advance_version_past(std::uint64_t floor);

  std::size_t memory_bytes() const;

  /// Rebuild hooks for snapshot loading: symbols are interned in id order,
  /// then the already-deduplicated edge list is adopted in one step.
  FunctionId intern_function(std::string_view name) { return functions_.intern(name); }
  FileId intern_file(std::string_view path) { return files_.intern(path); }
  void reserve_symbols(std::size_t functions, std::size_t files);
  void adopt_edges(std::vector<CallEdge> edges);
  void set_version(std::uint64_t version) { version_ = version; }

 private:
  struct EdgeKey {
    std::uint64_t pair;  // caller << 32 | callee
    std::uint32_t file;
    EdgeStyle style;
    friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
  };
  struct EdgeKeyHash {
    std::size_t operator()(const EdgeKey& k) const noexcept;
  };

  /// Returns true if the edge was new.
  bool insert(FunctionId caller, FunctionId callee, FileId file, EdgeStyle style,
              std::uint32_t multiplicity);
  void grow_adjacency();
  /// Builds the dedup maps deferred by adopt_edges.
  void rebuild_slots();

  SymbolTable<FunctionId> functions_;
  SymbolTable<FileId> files_;
  std::vector<CallEdge> edges_;
  std::unordered_map<EdgeKey, std::uint32_t, EdgeKeyHash> edge_slot_;
  std::unordered_set<std::uint64_t> name_pairs_;
  std::vector<std::vector<FunctionId>> forward_;
  std::vector<std::vector<FunctionId>> reverse_;
  std::vector<std::vector<std::uint32_t>> by_file_;
  std::uint64_t raw_edge_count_ = 0;
  std::uint64_t version_ = 0;
  bool slots_stale_ = false;
  mutable std::atomic<std::uint64_t> lookups_{0};
};

}  // namespace cgoracle
