#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgoracle/eg_format.hpp"

namespace cgoracle {

enum class IngestMode : std::uint8_t { strict, skip };

struct FileError {
  std::string file;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
  std::string message;
};

struct IngestReport {
  std::size_t files_attempted = 0;
  std::size_t files_parsed = 0;
  std::size_t edges_emitted = 0;
  std::size_t duplicate_edges = 0;
  std::size_t missing_style = 0;
  std::vector<FileError> parse_errors;
  double elapsed = 0.0;
};

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Receives one file's edges; returns the number of duplicates it saw.
using EdgeSink = std::function<std::size_t(std::span<const RawEdge>)>;

/// Dump files under `root` (recursively) ending in `.eg` or `.dot`, sorted.
std::vector<std::filesystem::path> find_dump_files(const std::filesystem::path& root);

/// `mm/slab.c.eg` under root -> "mm/slab.c".
std::string file_tag(const std::filesystem::path& root, const std::filesystem::path& file);

/// Parses every dump under `root` and hands each file's edges to `sink`, one
/// batch per file, in sorted path order. Files are parsed on `threads`
/// workers (0 picks hardware concurrency).
///
/// skip mode records failures in the report and continues. strict mode
/// throws IngestError at the first failing file, after committing only the
/// files that precede it. A missing or unreadable root always throws.
IngestReport ingest_path(const std::filesystem::path& root, IngestMode mode, const EdgeSink& sink,
                         unsigned threads = 0);

}  // namespace cgoracle
