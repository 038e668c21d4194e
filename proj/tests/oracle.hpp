#pragma once

// Test-only oracles and fixtures. Nothing here calls into ClosureEngine.

#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cgoracle/call_graph.hpp"
#include "cgoracle/eg_format.hpp"

namespace cgoracle::testing {

using Rng = std::mt19937_64;

/// A digraph over nodes 0..n-1, named "f<i>" when loaded.
struct SmallGraph {
  std::size_t n = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
};

/// Up to `max_nodes` nodes mixing a sparse random DAG part, back edges
/// (cycles), self-loops and isolated pieces.
SmallGraph random_digraph(Rng& rng, std::size_t max_nodes);

std::string node_name(std::uint32_t i);

/// Loads `g` with each edge tagged by one of a few file names.
CallGraph to_call_graph(const SmallGraph& g, Rng& rng);
std::vector<RawEdge> to_raw_edges(const SmallGraph& g, Rng& rng);

/// reach[a][b] != 0 iff b is reachable from a by one or more edges.
/// Floyd-Warshall style transitive closure, O(n^3).
std::vector<std::vector<char>> warshall_closure(std::size_t n,
                                                std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

/// Oracle answers as name sets.
std::set<std::string> oracle_forward(const std::vector<std::vector<char>>& reach, std::uint32_t a);
std::set<std::string> oracle_backward(const std::vector<std::vector<char>>& reach, std::uint32_t b);

/// Barrier oracle: closure of the graph with `excluded \ {root}` deleted,
/// minus `excluded`. Plain DFS over an adjacency list.
std::set<std::string> oracle_barrier(const SmallGraph& g, std::uint32_t root,
                                     const std::set<std::uint32_t>& excluded);

std::set<std::string> names_of(const CallGraph& g, std::span<const FunctionId> ids);

/// A random word of the dump grammar and the edges it denotes.
struct Derivation {
  std::string text;
  std::vector<RawEdge> edges;
};

/// Random node declarations, edges (with and without styles), standalone
/// style descriptors, `->` and `- >` spellings and varied whitespace.
/// `max_statements` bounds the derivation depth.
Derivation random_derivation(Rng& rng, std::size_t max_statements, const std::string& file);

std::string random_function_name(Rng& rng);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cgoracle::testing
