#include "cgoracle/snapshot.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <fstream>

namespace cgoracle {
namespace {

constexpr char kMagic[8] = {'C', 'G', 'O', 'R', 'S', 'N', 'A', 'P'};

class Writer {
 public:
  void bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  template <class T>
  void le(T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      buf_.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
    }
  }
  void str(std::string_view s) {
    le<std::uint32_t>(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t>& buffer() { return buf_; }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> data) : data_(data) {}

  template <class T>
  T le() {
    need(sizeof(T));
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{data_[pos_ + i]} << (8 * i);
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }
  std::string_view str() {
    const auto n = le<std::uint32_t>();
    need(n);
    std::string_view s(reinterpret_cast<const char*>(data_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n) throw SnapshotError("snapshot body truncated");
  }
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

std::uint32_t crc(std::span<const std::uint8_t> bytes) {
  uLong c = crc32(0L, Z_NULL, 0);
  // crc32 takes uInt lengths; feed in chunks for very large snapshots.
  std::size_t off = 0;
  while (off < bytes.size()) {
    const auto n = static_cast<uInt>(std::min<std::size_t>(bytes.size() - off, 1u << 30));
    c = crc32(c, bytes.data() + off, n);
    off += n;
  }
  return static_cast<std::uint32_t>(c);
}

}  // namespace

std::vector<std::uint8_t> encode_snapshot(const CallGraph& graph) {
  Writer w;
  w.buffer().reserve(64 + graph.edges().size() * 17 + graph.functions().memory_bytes() / 2);
  w.bytes(kMagic, sizeof kMagic);
  w.le<std::uint32_t>(kSnapshotFormatVersion);
  w.le<std::uint64_t>(graph.version());
  w.le<std::uint32_t>(static_cast<std::uint32_t>(graph.functions().size()));
  for (std::uint32_t i = 0; i < graph.functions().size(); ++i) w.str(graph.name(FunctionId{i}));
  w.le<std::uint32_t>(static_cast<std::uint32_t>(graph.files().size()));
  for (std::uint32_t i = 0; i < graph.files().size(); ++i) w.str(graph.path(FileId{i}));
  w.le<std::uint64_t>(graph.edges().size());
  for (const auto& e : graph.edges()) {
    w.le<std::uint32_t>(e.caller.value);
    w.le<std::uint32_t>(e.callee.value);
    w.le<std::uint32_t>(e.file.value);
    w.le<std::uint8_t>(static_cast<std::uint8_t>(e.style));
    w.le<std::uint32_t>(e.multiplicity);
  }
  w.le<std::uint32_t>(crc(w.buffer()));
  return std::move(w.buffer());
}

CallGraph decode_snapshot(std::span<const std::uint8_t> bytes) {
  constexpr std::size_t kHeader = sizeof kMagic + 4;
  if (bytes.size() < kHeader || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw SnapshotError("not a call-graph snapshot (bad magic)");
  }
  Reader header(bytes.subspan(sizeof kMagic, 4));
  const auto format = header.le<std::uint32_t>();
  if (format != kSnapshotFormatVersion) {
    throw SnapshotError("snapshot format version mismatch: file has " + std::to_string(format) +
                        ", expected " + std::to_string(kSnapshotFormatVersion));
  }
  if (bytes.size() < kHeader + 4) throw SnapshotError("snapshot checksum failure: file truncated");
  const auto body = bytes.first(bytes.size() - 4);
  const auto stored = Reader(bytes.last(4)).le<std::uint32_t>();
  if (crc(body) != stored) {
    throw SnapshotError("snapshot checksum failure: file is truncated or corrupt");
  }

  Reader r(body.subspan(kHeader));
  CallGraph graph;
  const auto version = r.le<std::uint64_t>();
  const auto function_count = r.le<std::uint32_t>();
  graph.reserve_symbols(function_count, 0);
  for (std::uint32_t i = 0; i < function_count; ++i) {
    if (graph.intern_function(r.str()).value != i) {
      throw SnapshotError("snapshot corrupt: duplicate function name");
    }
  }
  const auto file_count = r.le<std::uint32_t>();
  for (std::uint32_t i = 0; i < file_count; ++i) {
    if (graph.intern_file(r.str()).value != i) {
      throw SnapshotError("snapshot corrupt: duplicate file path");
    }
  }
  const auto edge_count = r.le<std::uint64_t>();
  constexpr std::size_t kEdgeBytes = 17;
  if (edge_count > body.size() / kEdgeBytes) throw SnapshotError("snapshot body truncated");
  std::vector<CallEdge> edges;
  edges.reserve(edge_count);
  for (std::uint64_t i = 0; i < edge_count; ++i) {
    CallEdge e;
    e.caller.value = r.le<std::uint32_t>();
    e.callee.value = r.le<std::uint32_t>();
    e.file.value = r.le<std::uint32_t>();
    const auto style = r.le<std::uint8_t>();
    e.multiplicity = r.le<std::uint32_t>();
    if (e.caller.value >= function_count || e.callee.value >= function_count ||
        e.file.value >= file_count || style > 2 || e.multiplicity == 0) {
      throw SnapshotError("snapshot corrupt: edge " + std::to_string(i) + " out of range");
    }
    e.style = static_cast<EdgeStyle>(style);
    edges.push_back(e);
  }
  if (!r.done()) throw SnapshotError("snapshot corrupt: trailing bytes");
  graph.adopt_edges(std::move(edges));
  graph.set_version(version);
  return graph;
}

void save_snapshot(const CallGraph& graph, const std::filesystem::path& path) {
  const auto bytes = encode_snapshot(graph);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw SnapshotError("cannot open snapshot for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw SnapshotError("failed writing snapshot: " + path.string());
}

CallGraph load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw SnapshotError("cannot open snapshot: " + path.string());
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(in.tellg()));
  in.seekg(0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!in) throw SnapshotError("failed reading snapshot: " + path.string());
  return decode_snapshot(bytes);
}

}  // namespace cgoracle
