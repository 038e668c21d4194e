#include "cgoracle/database.hpp"

#include "cgoracle/snapshot.hpp"

namespace cgoracle {

GraphDatabase::GraphDatabase(ClosureOptions options) : engine_(graph_, options) {}

GraphDatabase::GraphDatabase(CallGraph graph, ClosureOptions options)
    : graph_(std::move(graph)), engine_(graph_, options) {}

IngestReport GraphDatabase::ingest(const std::filesystem::path& root, IngestMode mode,
                                   unsigned threads) {
  // Parsing runs unlocked; each file's batch takes the writer lock on its own.
  return ingest_path(
      root, mode,
      [this](std::span<const RawEdge> batch) { return add_edges(batch).duplicates; }, threads);
}

AddResult GraphDatabase::add_edges(std::span<const RawEdge> batch) {
  std::unique_lock lock(mutex_);
  return graph_.add_edges(batch);
}

void GraphDatabase::save(const std::filesystem::path& path) const {
  std::shared_lock lock(mutex_);
  save_snapshot(graph_, path);
}

void GraphDatabase::load(const std::filesystem::path& path) {
  CallGraph loaded = load_snapshot(path);
  std::unique_lock lock(mutex_);
  loaded.advance_version_past(graph_.version());
  graph_ = std::move(loaded);
  engine_.invalidate(graph_.version());
}

GraphStats GraphDatabase::stats() const {
  std::shared_lock lock(mutex_);
  return graph_.stats();
}

}  // namespace cgoracle
