#include "cgoracle/call_graph.hpp"

namespace cgoracle {
namespace {

std::uint64_t pack(FunctionId a, FunctionId b) {
  return (std::uint64_t{a.value} << 32) | b.value;
}

template <class T>
std::size_t nested_bytes(const std::vector<std::vector<T>>& v) {
  std::size_t total = v.capacity() * sizeof(std::vector<T>);
  for (const auto& inner : v) total += inner.capacity() * sizeof(T);
  return total;
}

}  // namespace

std::size_t CallGraph::EdgeKeyHash::operator()(const EdgeKey& k) const noexcept {
  std::uint64_t h = k.pair * 0x9E3779B97F4A7C15ull;
  h ^= (std::uint64_t{k.file} << 8 | static_cast<std::uint8_t>(k.style)) + 0x632BE59BD9B4E019ull +
       (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h ^ (h >> 29));
}

CallGraph::CallGraph(const CallGraph& other)
    : functions_(other.functions_),
      files_(other.files_),
      edges_(other.edges_),
      edge_slot_(other.edge_slot_),
      name_pairs_(other.name_pairs_),
      forward_(other.forward_),
      reverse_(other.reverse_),
      by_file_(other.by_file_),
      raw_edge_count_(other.raw_edge_count_),
      version_(other.version_),
      slots_stale_(other.slots_stale_) {}

CallGraph& CallGraph::operator=(const CallGraph& other) {
  if (this != &other) *this = CallGraph(other);
  return *this;
}

CallGraph::CallGraph(CallGraph&& other) noexcept
    : functions_(std::move(other.functions_)),
      files_(std::move(other.files_)),
      edges_(std::move(other.edges_)),
      edge_slot_(std::move(other.edge_slot_)),
      name_pairs_(std::move(other.name_pairs_)),
      forward_(std::move(other.forward_)),
      reverse_(std::move(other.reverse_)),
      by_file_(std::move(other.by_file_)),
      raw_edge_count_(other.raw_edge_count_),
      version_(other.version_),
      slots_stale_(other.slots_stale_) {}

CallGraph& CallGraph::operator=(CallGraph&& other) noexcept {
  functions_ = std::move(other.functions_);
  files_ = std::move(other.files_);
  edges_ = std::move(other.edges_);
  edge_slot_ = std::move(other.edge_slot_);
  name_pairs_ = std::move(other.name_pairs_);
  forward_ = std::move(other.forward_);
  reverse_ = std::move(other.reverse_);
  by_file_ = std::move(other.by_file_);
  raw_edge_count_ = other.raw_edge_count_;
  version_ = other.version_;
  slots_stale_ = other.slots_stale_;
  return *this;
}

void CallGraph::grow_adjacency() {
  if (forward_.size() < functions_.size()) {
    forward_.resize(functions_.size());
    reverse_.resize(functions_.size());
  }
  if (by_file_.size() < files_.size()) by_file_.resize(files_.size());
}

bool CallGraph::insert(FunctionId caller, FunctionId callee, FileId file, EdgeStyle style,
                       std::uint32_t multiplicity) {
  raw_edge_count_ += multiplicity;
  const EdgeKey key{pack(caller, callee), file.value, style};
  const auto [slot, fresh] =
      edge_slot_.try_emplace(key, static_cast<std::uint32_t>(edges_.size()));
  if (!fresh) {
    edges_[slot->second].multiplicity += multiplicity;
    return false;
  }
  edges_.push_back(CallEdge{caller, callee, file, style, multiplicity});
  by_file_[file.value].push_back(slot->second);
  if (name_pairs_.insert(key.pair).second) {
    forward_[caller.value].push_back(callee);
    reverse_[callee.value].push_back(caller);
  }
  return true;
}

AddResult CallGraph::add_edges(std::span<const RawEdge> batch) {
  if (slots_stale_) rebuild_slots();
  AddResult result;
  for (const auto& raw : batch) {
    const FunctionId caller = functions_.intern(raw.source);
    const FunctionId callee = functions_.intern(raw.dest);
    const FileId file = files_.intern(raw.file);
    grow_adjacency();
    if (insert(caller, callee, file, raw.style, 1)) {
      ++result.added;
    } else {
      ++result.duplicates;
    }
  }
  ++version_;
  return result;
}

void CallGraph::reserve_symbols(std::size_t functions, std::size_t files) {
  functions_.reserve(functions);
  files_.reserve(files);
}

void CallGraph::adopt_edges(std::vector<CallEdge> edges) {
  edges_ = std::move(edges);
  edge_slot_.clear();
  name_pairs_.clear();
  forward_.assign(functions_.size(), {});
  reverse_.assign(functions_.size(), {});
  by_file_.assign(files_.size(), {});
  raw_edge_count_ = 0;

  // Stable counting sort by caller, then one stamp pass per caller marks the
  // first edge of every distinct (caller, callee) pair.
  std::vector<std::uint32_t> start(functions_.size() + 1, 0);
  for (const auto& e : edges_) ++start[e.caller.value + 1];
  for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
  std::vector<std::uint32_t> order(edges_.size());
  {
    auto next = start;
    for (std::uint32_t i = 0; i < edges_.size(); ++i) order[next[edges_[i].caller.value]++] = i;
  }
  std::vector<std::uint32_t> stamp(functions_.size(), 0);
  std::vector<bool> first(edges_.size(), false);
  for (std::uint32_t c = 0; c + 1 < start.size(); ++c) {
    for (auto k = start[c]; k < start[c + 1]; ++k) {
      const auto i = order[k];
      auto& mark = stamp[edges_[i].callee.value];
      if (mark != c + 1) {
        mark = c + 1;
        first[i] = true;
      }
    }
  }
  std::vector<std::uint32_t> out_degree(functions_.size(), 0);
  std::vector<std::uint32_t> in_degree(functions_.size(), 0);
  std::vector<std::uint32_t> per_file(files_.size(), 0);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    ++per_file[e.file.value];
    if (first[i]) {
      ++out_degree[e.caller.value];
      ++in_degree[e.callee.value];
    }
  }
  for (std::size_t f = 0; f < functions_.size(); ++f) {
    forward_[f].reserve(out_degree[f]);
    reverse_[f].reserve(in_degree[f]);
  }
  for (std::size_t f = 0; f < files_.size(); ++f) by_file_[f].reserve(per_file[f]);
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    raw_edge_count_ += e.multiplicity;
    by_file_[e.file.value].push_back(i);
    if (first[i]) {
      forward_[e.caller.value].push_back(e.callee);
      reverse_[e.callee.value].push_back(e.caller);
    }
  }
  slots_stale_ = true;
}

void CallGraph::rebuild_slots() {
  edge_slot_.reserve(edges_.size());
  name_pairs_.reserve(edges_.size());
  for (std::uint32_t i = 0; i < edges_.size(); ++i) {
    const auto& e = edges_[i];
    const EdgeKey key{pack(e.caller, e.callee), e.file.value, e.style};
    edge_slot_.emplace(key, i);
    name_pairs_.insert(key.pair);
  }
  slots_stale_ = false;
}

std::span<const FunctionId> CallGraph::callees_of(FunctionId f) const {
  lookups_.fetch_add(1, std::memory_order_relaxed);
  if (f.value >= forward_.size()) return {};
  return forward_[f.value];
}

std::span<const FunctionId> CallGraph::callers_of(FunctionId f) const {
  lookups_.fetch_add(1, std::memory_order_relaxed);
  if (f.value >= reverse_.size()) return {};
  return reverse_[f.value];
}

std::vector<FunctionId> CallGraph::callees_of(std::string_view name) const {
  const auto id = functions_.find(name);
  if (!id) return {};
  const auto span = callees_of(*id);
  return {span.begin(), span.end()};
}

std::vector<FunctionId> CallGraph::callers_of(std::string_view name) const {
  const auto id = functions_.find(name);
  if (!id) return {};
  const auto span = callers_of(*id);
  return {span.begin(), span.end()};
}

std::vector<CallEdge> CallGraph::edges_in_file(FileId file) const {
  lookups_.fetch_add(1, std::memory_order_relaxed);
  std::vector<CallEdge> out;
  if (file.value >= by_file_.size()) return out;
  out.reserve(by_file_[file.value].size());
  for (auto slot : by_file_[file.value]) out.push_back(edges_[slot]);
  return out;
}

std::vector<CallEdge> CallGraph::edges_in_file(std::string_view path) const {
  const auto id = files_.find(path);
  if (!id) return {};
  return edges_in_file(*id);
}

GraphStats CallGraph::stats() const {
  return GraphStats{functions_.size(), files_.size(), edges_.size(), raw_edge_count_, version_};
}

void CallGraph::advance_version_past(std::uint64_t floor) {
  if (version_ <= floor) version_ = floor + 1;
}

std::size_t CallGraph::memory_bytes() const {
  return functions_.memory_bytes() + files_.memory_bytes() +
         edges_.capacity() * sizeof(CallEdge) +
         edge_slot_.size() * (sizeof(EdgeKey) + sizeof(std::uint32_t) + 2 * sizeof(void*)) +
         name_pairs_.size() * (sizeof(std::uint64_t) + 2 * sizeof(void*)) +
         nested_bytes(forward_) + nested_bytes(reverse_) + nested_bytes(by_file_);
}

}  // namespace cgoracle
