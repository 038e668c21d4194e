#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cgoracle/eg_format.hpp"

namespace cgoracle {

/// Shape of a generated kernel-like call graph.
///
/// Functions are laid out in modules. Calls go either down-rank inside the
/// caller's module or out to a shared library whose lowest-ranked member
/// (named `kmalloc`) is the most widely used. A `cycle_fraction` of
/// in-module calls point up-rank instead, forming recursion cycles.
struct SyntheticSpec {
  std::size_t edges = 50000;
  double mean_out_degree = 3.5;
  double leaf_fraction = 0.2;
  double library_fraction = 0.02;
  double library_call_fraction = 0.25;
  double cycle_fraction = 0.02;
  std::size_t module_size = 64;
  std::size_t files = 1000;
  std::uint64_t seed = 1;
};

/// Exactly `spec.edges` raw edges (duplicates possible), deterministic for a
/// given spec.
std::vector<RawEdge> generate_call_graph(const SyntheticSpec& spec);

/// Writes one `<file>.eg` per distinct file tag under `dir`, each in the
/// grammar's concrete syntax. Returns the number of files written.
std::size_t write_dump_files(const std::filesystem::path& dir, std::span<const RawEdge> edges);

}  // namespace cgoracle
