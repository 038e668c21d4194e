#include "cgoracle/ingest.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <optional>
#include <thread>
#include <variant>

namespace cgoracle {
namespace {

namespace fs = std::filesystem;

struct Parsed {
  ParseOutcome outcome;
};

using FileResult = std::variant<Parsed, FileError>;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw std::runtime_error("cannot open file");
  std::string text(static_cast<std::size_t>(in.tellg()), '\0');
  in.seekg(0);
  in.read(text.data(), static_cast<std::streamsize>(text.size()));
  if (!in) throw std::runtime_error("read failed");
  return text;
}

FileResult parse_one(const fs::path& root, const fs::path& file) {
  const std::string tag = file_tag(root, file);
  try {
    return Parsed{parse_eg_text(read_file(file), tag)};
  } catch (const SyntaxError& e) {
    return FileError{tag, e.line(), e.column(), e.detail()};
  } catch (const std::exception& e) {
    return FileError{tag, 0, 0, e.what()};
  }
}

}  // namespace

std::vector<fs::path> find_dump_files(const fs::path& root) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension();
    if (ext == ".eg" || ext == ".dot") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::string file_tag(const fs::path& root, const fs::path& file) {
  fs::path rel = file.lexically_relative(root);
  if (rel.empty() || *rel.begin() == "..") rel = file;
  rel.replace_extension();
  return rel.generic_string();
}

IngestReport ingest_path(const fs::path& root, IngestMode mode, const EdgeSink& sink,
                         unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw IngestError("cannot read input directory: " + root.string());
  }
  std::vector<fs::path> files;
  try {
    files = find_dump_files(root);
  } catch (const fs::filesystem_error& e) {
    throw IngestError(std::string("cannot read input directory: ") + e.what());
  }

  IngestReport report;
  report.files_attempted = files.size();
  std::vector<std::optional<FileResult>> results(files.size());

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, files.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < files.size(); ++i) results[i] = parse_one(root, files[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) {
          results[i] = parse_one(root, files[i]);
        }
      });
    }
  }

  for (auto& slot : results) {
    if (auto* error = std::get_if<FileError>(&*slot)) {
      if (mode == IngestMode::strict) {
        throw IngestError(error->file + ":" + std::to_string(error->line) + ":" +
                          std::to_string(error->column) + ": " + error->message);
      }
      report.parse_errors.push_back(std::move(*error));
      continue;
    }
    auto& parsed = std::get<Parsed>(*slot).outcome;
    ++report.files_parsed;
    report.edges_emitted += parsed.edges.size();
    report.missing_style += parsed.missing_style;
    report.duplicate_edges += sink(parsed.edges);
  }
  report.elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace cgoracle
