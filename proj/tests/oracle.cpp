#include "oracle.hpp"

#include <atomic>
#include <fstream>
#include <stdexcept>

#include <unistd.h>

namespace cgoracle::testing {
namespace {

std::size_t pick(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

const char* kFiles[] = {"kernel/sched.c", "mm/slab.c", "fs/open.c", "lib/string.c"};

std::string whitespace(Rng& rng) {
  static const char* kSpaces[] = {"", " ", "  ", "\n", "\t", " \n  ", "\r\n"};
  return kSpaces[pick(rng, 7)];
}

std::string space(Rng& rng) {
  static const char* kSpaces[] = {" ", "  ", "\n", "\t", " \n  "};
  return kSpaces[pick(rng, 5)];
}

}  // namespace

SmallGraph random_digraph(Rng& rng, std::size_t max_nodes) {
  SmallGraph g;
  g.n = 1 + pick(rng, max_nodes);
  const std::size_t components = 1 + pick(rng, 4);
  const std::size_t m = pick(rng, g.n * 3 + 1);
  auto in_component = [&](std::uint32_t a) {
    // Random member of a's component.
    const std::size_t c = a % components;
    const std::size_t members = (g.n - c + components - 1) / components;
    return static_cast<std::uint32_t>(c + components * pick(rng, members));
  };
  for (std::size_t i = 0; i < m; ++i) {
    auto a = static_cast<std::uint32_t>(pick(rng, g.n));
    const auto roll = pick(rng, 100);
    auto b = a;  // 5% self-loops
    if (roll >= 5) {
      b = in_component(a);
      // Mostly low-to-high edges; the rest point anywhere and close cycles.
      if (roll < 85 && b < a) std::swap(a, b);
    }
    g.edges.emplace_back(a, b);
  }
  return g;
}

std::string node_name(std::uint32_t i) { return "f" + std::to_string(i); }

std::vector<RawEdge> to_raw_edges(const SmallGraph& g, Rng& rng) {
  std::vector<RawEdge> raw;
  raw.reserve(g.edges.size());
  for (auto [a, b] : g.edges) {
    raw.push_back(RawEdge{node_name(a), node_name(b),
                          pick(rng, 4) == 0 ? EdgeStyle::dotted : EdgeStyle::solid,
                          kFiles[pick(rng, 4)]});
  }
  return raw;
}

CallGraph to_call_graph(const SmallGraph& g, Rng& rng) {
  CallGraph graph;
  const auto raw = to_raw_edges(g, rng);
  graph.add_edges(raw);
  return graph;
}

std::vector<std::vector<char>> warshall_closure(
    std::size_t n, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
  std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
  for (auto [a, b] : edges) reach[a][b] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i][k]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (reach[k][j]) reach[i][j] = 1;
      }
    }
  }
  return reach;
}

std::set<std::string> oracle_forward(const std::vector<std::vector<char>>& reach,
                                     std::uint32_t a) {
  std::set<std::string> out;
  for (std::uint32_t b = 0; b < reach.size(); ++b) {
    if (reach[a][b]) out.insert(node_name(b));
  }
  return out;
}

std::set<std::string> oracle_backward(const std::vector<std::vector<char>>& reach,
                                      std::uint32_t b) {
  std::set<std::string> out;
  for (std::uint32_t a = 0; a < reach.size(); ++a) {
    if (reach[a][b]) out.insert(node_name(a));
  }
  return out;
}

std::set<std::string> oracle_barrier(const SmallGraph& g, std::uint32_t root,
                                     const std::set<std::uint32_t>& excluded) {
  // Depth-first search over the graph with excluded vertices (other than
  // the root) deleted.
  std::vector<std::vector<std::uint32_t>> adj(g.n);
  for (auto [a, b] : g.edges) {
    const bool drop_a = a != root && excluded.contains(a);
    const bool drop_b = b != root && excluded.contains(b);
    if (!drop_a && !drop_b) adj[a].push_back(b);
  }
  std::vector<char> seen(g.n, 0);
  std::vector<std::uint32_t> stack(adj[root].begin(), adj[root].end());
  std::set<std::string> out;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    if (seen[v]) continue;
    seen[v] = 1;
    if (!excluded.contains(v)) out.insert(node_name(v));
    stack.insert(stack.end(), adj[v].begin(), adj[v].end());
  }
  return out;
}

std::set<std::string> names_of(const CallGraph& g, std::span<const FunctionId> ids) {
  std::set<std::string> out;
  for (auto f : ids) out.emplace(g.name(f));
  return out;
}

std::string random_function_name(Rng& rng) {
  static const char kAlnum[] = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
  std::string name(pick(rng, 3), '_');
  name += kAlnum[pick(rng, sizeof kAlnum - 1)];
  const std::size_t tail = pick(rng, 10);
  for (std::size_t i = 0; i < tail; ++i) {
    name += pick(rng, 6) == 0 ? '_' : kAlnum[pick(rng, sizeof kAlnum - 1)];
  }
  return name;
}

Derivation random_derivation(Rng& rng, std::size_t max_statements, const std::string& file) {
  Derivation d;
  std::vector<std::string> pool;
  const std::size_t pool_size = 1 + pick(rng, 12);
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back(random_function_name(rng));
  auto id = [&](const std::string& name) { return "\"" + name + "\""; };
  auto style_descr = [&](EdgeStyle s) {
    return "[" + whitespace(rng) + "style" + whitespace(rng) + "=" + whitespace(rng) +
           std::string(to_string(s)) + whitespace(rng) + "]" + whitespace(rng) + ";";
  };

  d.text = whitespace(rng) + "digraph" + space(rng) + "callgraph" + whitespace(rng) + "{";
  const std::size_t statements = pick(rng, max_statements + 1);
  bool open_edge = false;  // last statement was an edge without a style
  for (std::size_t i = 0; i < statements; ++i) {
    d.text += whitespace(rng);
    auto roll = pick(rng, 10);
    // A standalone style right after a style-less edge would attach to it.
    if (roll == 2 && open_edge) roll = 0;
    open_edge = false;
    if (roll < 2) {
      d.text += id(pool[pick(rng, pool.size())]) + whitespace(rng) + ";";
    } else if (roll < 3) {
      d.text += style_descr(pick(rng, 2) ? EdgeStyle::solid : EdgeStyle::dotted);
    } else {
      RawEdge e{pool[pick(rng, pool.size())], pool[pick(rng, pool.size())],
                EdgeStyle::unspecified, file};
      const auto s = pick(rng, 10);
      e.style = s < 6 ? EdgeStyle::solid : s < 9 ? EdgeStyle::dotted : EdgeStyle::unspecified;
      d.text += id(e.source) + whitespace(rng) + (pick(rng, 3) ? "->" : "-" + space(rng) + ">") +
                whitespace(rng) + id(e.dest);
      if (e.style != EdgeStyle::unspecified) {
        d.text += whitespace(rng) + style_descr(e.style);
      } else {
        open_edge = true;
      }
      d.edges.push_back(std::move(e));
    }
  }
  d.text += whitespace(rng) + "}" + whitespace(rng);
  return d;
}

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("cgoracle-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace cgoracle::testing
