#pragma once

#include <filesystem>
#include <mutex>
#include <shared_mutex>

#include "cgoracle/call_graph.hpp"
#include "cgoracle/ingest.hpp"
#include "cgoracle/reachability.hpp"

namespace cgoracle {

/// A CallGraph plus its closure cache behind a single-writer/multi-reader
/// lock. Readers hold the shared lock for a whole query, so no query ever
/// sees a partially applied batch.
class GraphDatabase {
 public:
  explicit GraphDatabase(ClosureOptions options = {});
  explicit GraphDatabase(CallGraph graph, ClosureOptions options = {});

  GraphDatabase(const GraphDatabase&) = delete;
  GraphDatabase& operator=(const GraphDatabase&) = delete;

  IngestReport ingest(const std::filesystem::path& root, IngestMode mode, unsigned threads = 0);
  AddResult add_edges(std::span<const RawEdge> batch);
  void save(const std::filesystem::path& path) const;
  /// Replaces the whole graph; the version moves past the old one.
  void load(const std::filesystem::path& path);

  /// Runs `fn(const CallGraph&, ClosureEngine&)` under the shared lock.
  template <class Fn>
  decltype(auto) read(Fn&& fn) {
    std::shared_lock lock(mutex_);
    engine_.invalidate(graph_.version());
    return fn(static_cast<const CallGraph&>(graph_), engine_);
  }

  GraphStats stats() const;

 private:
  mutable std::shared_mutex mutex_;
  CallGraph graph_;
  ClosureEngine engine_;
};

}  // namespace cgoracle
