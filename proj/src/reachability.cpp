#include "cgoracle/reachability.hpp"

#include <algorithm>

namespace cgoracle {
namespace {

/// Per-thread visited marks, reset in O(1) by bumping the epoch.
class Marks {
 public:
  void begin(std::size_t n) {
    if (stamp_.size() < n) stamp_.resize(n, 0);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  bool test(FunctionId f) const { return stamp_[f.value] == epoch_; }
  /// Returns true if `f` was not yet marked.
  bool mark(FunctionId f) {
    if (stamp_[f.value] == epoch_) return false;
    stamp_[f.value] = epoch_;
    return true;
  }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

thread_local Marks visited_marks;
thread_local Marks frontier_marks;

/// Compressed adjacency built from one pass over the edge list.
struct Csr {
  std::vector<std::uint32_t> offsets;
  std::vector<FunctionId> targets;
};

Csr build_csr(const CallGraph& graph, Direction dir) {
  const std::size_t n = graph.function_count();
  Csr csr;
  csr.offsets.assign(n + 1, 0);
  for (const auto& e : graph.edges()) {
    ++csr.offsets[(dir == Direction::forward ? e.caller : e.callee).value + 1];
  }
  for (std::size_t i = 0; i < n; ++i) csr.offsets[i + 1] += csr.offsets[i];
  csr.targets.resize(graph.edges().size());
  std::vector<std::uint32_t> fill(csr.offsets.begin(), csr.offsets.end() - 1);
  for (const auto& e : graph.edges()) {
    const auto from = dir == Direction::forward ? e.caller : e.callee;
    csr.targets[fill[from.value]++] = dir == Direction::forward ? e.callee : e.caller;
  }
  return csr;
}

}  // namespace

std::string_view to_string(CutoffMode mode) {
  return mode == CutoffMode::filter ? "filter" : "barrier";
}

ClosureEngine::ClosureEngine(const CallGraph& graph, ClosureOptions options)
    : graph_(&graph), options_(options), built_for_version_(graph.version()) {}

void ClosureEngine::invalidate(std::uint64_t version) {
  std::lock_guard lock(mutex_);
  if (version == built_for_version_) return;
  forward_.clear();
  backward_.clear();
  built_for_version_ = version;
}

void ClosureEngine::sync_version() { invalidate(graph_->version()); }

ClosureHandle ClosureEngine::lookup_cached(FunctionId f, Direction dir) {
  if (!options_.caching) return nullptr;
  std::lock_guard lock(mutex_);
  const Cache& cache = dir == Direction::forward ? forward_ : backward_;
  if (auto it = cache.find(f); it != cache.end()) return it->second;
  return nullptr;
}

ClosureHandle ClosureEngine::store(FunctionId f, Direction dir, ClosureHandle set) {
  if (!options_.caching) return set;
  std::lock_guard lock(mutex_);
  Cache& cache = dir == Direction::forward ? forward_ : backward_;
  return cache.try_emplace(f, std::move(set)).first->second;
}

bool ClosureEngine::is_cached(FunctionId f, Direction dir) const {
  std::lock_guard lock(mutex_);
  if (built_for_version_ != graph_->version()) return false;
  const Cache& cache = dir == Direction::forward ? forward_ : backward_;
  return cache.contains(f);
}

void ClosureEngine::expand_frontier(const std::vector<FunctionId>& frontier, Direction dir,
                                    std::vector<FunctionId>& out) const {
  out.clear();
  if (options_.lookup == LookupStrategy::indexed) {
    for (auto node : frontier) {
      const auto next =
          dir == Direction::forward ? graph_->callees_of(node) : graph_->callers_of(node);
      out.insert(out.end(), next.begin(), next.end());
    }
    return;
  }
  graph_->note_lookup();
  frontier_marks.begin(graph_->function_count());
  for (auto node : frontier) frontier_marks.mark(node);
  if (dir == Direction::forward) {
    for (const auto& e : graph_->edges()) {
      if (frontier_marks.test(e.caller)) out.push_back(e.callee);
    }
  } else {
    for (const auto& e : graph_->edges()) {
      if (frontier_marks.test(e.callee)) out.push_back(e.caller);
    }
  }
}

ClosureSet ClosureEngine::traverse(FunctionId f, Direction dir, bool splice,
                                   const std::vector<char>* blocked) {
  ClosureSet result;
  if (f.value >= graph_->function_count()) return result;
  visited_marks.begin(graph_->function_count());
  std::vector<FunctionId> frontier{f};
  std::vector<FunctionId> candidates;
  std::vector<FunctionId> next;
  while (!frontier.empty()) {
    expand_frontier(frontier, dir, candidates);
    next.clear();
    for (auto node : candidates) {
      if (blocked && (*blocked)[node.value]) continue;
      if (!visited_marks.mark(node)) continue;
      result.push_back(node);
      if (splice) {
        if (auto known = lookup_cached(node, dir)) {
          for (auto member : *known) {
            if (visited_marks.mark(member)) result.push_back(member);
          }
          continue;
        }
      }
      next.push_back(node);
    }
    frontier.swap(next);
  }
  std::sort(result.begin(), result.end());
  return result;
}

ClosureHandle ClosureEngine::closure(FunctionId f, Direction dir) {
  sync_version();
  if (auto known = lookup_cached(f, dir)) {
    std::lock_guard lock(mutex_);
    ++hits_;
    return known;
  }
  {
    std::lock_guard lock(mutex_);
    ++misses_;
  }
  auto set = std::make_shared<const ClosureSet>(traverse(f, dir, options_.caching, nullptr));
  return store(f, dir, std::move(set));
}

ClosureHandle ClosureEngine::forward_closure(FunctionId f) { return closure(f, Direction::forward); }
ClosureHandle ClosureEngine::backward_closure(FunctionId f) {
  return closure(f, Direction::backward);
}

ClosureHandle ClosureEngine::forward_closure(std::string_view name) {
  if (auto id = graph_->find_function(name)) return forward_closure(*id);
  return std::make_shared<const ClosureSet>();
}

ClosureHandle ClosureEngine::backward_closure(std::string_view name) {
  if (auto id = graph_->find_function(name)) return backward_closure(*id);
  return std::make_shared<const ClosureSet>();
}

bool ClosureEngine::is_reachable(FunctionId from, FunctionId to) {
  sync_version();
  // Either direction's cached set answers the question without traversal.
  ClosureHandle set = lookup_cached(from, Direction::forward);
  if (set) return std::binary_search(set->begin(), set->end(), to);
  set = lookup_cached(to, Direction::backward);
  if (set) return std::binary_search(set->begin(), set->end(), from);
  set = forward_closure(from);
  return std::binary_search(set->begin(), set->end(), to);
}

bool ClosureEngine::is_reachable(std::string_view from, std::string_view to) {
  const auto a = graph_->find_function(from);
  const auto b = graph_->find_function(to);
  if (!a || !b) return false;
  return is_reachable(*a, *b);
}

ClosureSet ClosureEngine::cutoff_closure(FunctionId f, std::span<const FunctionId> excluded,
                                         CutoffMode mode) {
  sync_version();
  const std::size_t n = graph_->function_count();
  if (f.value >= n) return {};
  std::vector<char> blocked(n, 0);
  for (auto x : excluded) {
    if (x.value < n) blocked[x.value] = 1;
  }
  ClosureSet result;
  if (mode == CutoffMode::filter || excluded.empty()) {
    const auto full = forward_closure(f);
    result.reserve(full->size());
    for (auto g : *full) {
      if (!blocked[g.value]) result.push_back(g);
    }
    return result;
  }
  // The root is always expanded; it is only dropped from the answer.
  const bool root_blocked = blocked[f.value] != 0;
  blocked[f.value] = 0;
  result = traverse(f, Direction::forward, false, &blocked);
  if (root_blocked) std::erase(result, f);
  return result;
}

std::vector<FunctionId> ClosureEngine::dependency_order(Direction dir) const {
  const Csr csr = build_csr(*graph_, dir);
  const std::size_t n = graph_->function_count();
  std::vector<FunctionId> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;  // node, next edge slot
  for (std::uint32_t root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    stack.emplace_back(root, csr.offsets[root]);
    while (!stack.empty()) {
      auto& [node, slot] = stack.back();
      if (slot < csr.offsets[node + 1]) {
        const auto child = csr.targets[slot++].value;
        if (!seen[child]) {
          seen[child] = 1;
          stack.emplace_back(child, csr.offsets[child]);
        }
      } else {
        order.push_back(FunctionId{node});
        stack.pop_back();
      }
    }
  }
  return order;
}


std::uint64_t ClosureEngine::closure_edge_count() {
  sync_version();
  std::uint64_t total = 0;
  if (options_.caching) {
    for (auto f : dependency_order(Direction::forward)) {
      total += forward_closure(f)->size();
    }
    return total;
  }
  for (std::uint32_t i = 0; i < graph_->function_count(); ++i) {
    total += traverse(FunctionId{i}, Direction::forward, false, nullptr).size();
  }
  return total;
}

std::vector<std::pair<FunctionId, std::size_t>> ClosureEngine::top_called(std::size_t k) {
  sync_version();
  std::vector<std::pair<FunctionId, std::size_t>> ranked;
  if (options_.caching) {
    for (auto f : dependency_order(Direction::backward)) {
      if (auto size = backward_closure(f)->size(); size > 0) ranked.emplace_back(f, size);
    }
  } else {
    for (std::uint32_t i = 0; i < graph_->function_count(); ++i) {
      const auto size = traverse(FunctionId{i}, Direction::backward, false, nullptr).size();
      if (size > 0) ranked.emplace_back(FunctionId{i}, size);
    }
  }
  const auto by_rank = [this](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return graph_->name(a.first) < graph_->name(b.first);
  };
  if (ranked.size() > k) {
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k),
                      ranked.end(), by_rank);
    ranked.resize(k);
  } else {
    std::sort(ranked.begin(), ranked.end(), by_rank);
  }
  return ranked;
}

CacheStats ClosureEngine::cache_stats() const {
  std::lock_guard lock(mutex_);
  CacheStats s{hits_, misses_, forward_.size(), backward_.size(), 0};
  for (const auto& [f, set] : forward_) s.cached_members += set->size();
  for (const auto& [f, set] : backward_) s.cached_members += set->size();
  return s;
}

std::size_t ClosureEngine::cache_memory_bytes() const {
  const auto s = cache_stats();
  constexpr std::size_t kEntry =
      sizeof(FunctionId) + sizeof(ClosureHandle) + sizeof(ClosureSet) + 4 * sizeof(void*);
  return s.cached_members * sizeof(FunctionId) + (s.forward_entries + s.backward_entries) * kEntry;
}

}  // namespace cgoracle
