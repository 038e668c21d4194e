#include <doctest.h>

#include <algorithm>
#include <map>

#include "cgoracle/call_graph.hpp"
#include "oracle.hpp"

using namespace cgoracle;

namespace {

RawEdge edge(const char* a, const char* b, const char* file = "f.c",
             EdgeStyle style = EdgeStyle::solid) {
  return RawEdge{a, b, style, file};
}

std::set<std::string> names(const CallGraph& g, const std::vector<FunctionId>& ids) {
  return testing::names_of(g, ids);
}

}  // namespace

TEST_CASE("duplicates bump multiplicity") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b"), edge("a", "b")};
  const auto r = g.add_edges(batch);
  CHECK(r.added == 1);
  CHECK(r.duplicates == 1);
  CHECK(g.raw_edge_count() == 2);
  REQUIRE(g.edges().size() == 1);
  CHECK(g.edges()[0].multiplicity == 2);
}

TEST_CASE("empty batch still bumps the version") {
  CallGraph g;
  const auto before = g.version();
  const auto r = g.add_edges({});
  CHECK(r.added == 0);
  CHECK(r.duplicates == 0);
  CHECK(g.version() == before + 1);
}

TEST_CASE("callees and callers") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b"), edge("a", "c"), edge("d", "c")};
  g.add_edges(batch);
  CHECK(names(g, g.callees_of("a")) == std::set<std::string>{"b", "c"});
  CHECK(names(g, g.callers_of("c")) == std::set<std::string>{"a", "d"});
  CHECK(g.callees_of("zzz_unknown").empty());
  CHECK(CallGraph{}.callers_of("b").empty());
}

TEST_CASE("same pair in two files is one name-level neighbor") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b", "x.c"), edge("a", "b", "y.c"),
                                      edge("a", "b", "x.c", EdgeStyle::dotted)};
  g.add_edges(batch);
  CHECK(g.edges().size() == 3);
  CHECK(g.callees_of("a").size() == 1);
  CHECK(g.callers_of("b").size() == 1);
}

TEST_CASE("edges_in_file partitions the edge set") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b", "x.c"), edge("c", "d", "y.c"),
                                      edge("b", "c", "x.c")};
  g.add_edges(batch);
  const auto x = g.edges_in_file("x.c");
  REQUIRE(x.size() == 2);
  CHECK(g.name(x[0].caller) == "a");
  CHECK(g.name(x[1].caller) == "b");
  CHECK(g.edges_in_file("y.c").size() == 1);
  CHECK(g.edges_in_file("nope.c").empty());
}

TEST_CASE("stats") {
  CHECK(CallGraph{}.stats() == GraphStats{});
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b"), edge("a", "b"), edge("a", "c")};
  g.add_edges(batch);
  const auto s = g.stats();
  CHECK(s.edge_count == 2);
  CHECK(s.raw_edge_count == 3);
  CHECK(s.function_count == 3);
  CHECK(s.file_count == 1);
}

TEST_CASE("indexes agree with full scans on random graphs") {
  testing::Rng rng(21);
  for (int round = 0; round < 40; ++round) {
    const auto small = testing::random_digraph(rng, round < 35 ? 200 : 4000);
    const auto raw = testing::to_raw_edges(small, rng);
    CallGraph g;
    // Several batches, so the version moves more than once.
    const auto half = raw.size() / 2;
    const auto v0 = g.version();
    g.add_edges(std::span(raw).first(half));
    const auto v1 = g.version();
    g.add_edges(std::span(raw).subspan(half));
    CHECK(v1 > v0);
    CHECK(g.version() > v1);

    std::map<std::string, std::set<std::string>> fwd, rev;
    std::map<std::string, std::size_t> per_file;
    std::uint64_t raw_total = 0;
    for (const auto& e : g.edges()) {
      fwd[std::string(g.name(e.caller))].emplace(g.name(e.callee));
      rev[std::string(g.name(e.callee))].emplace(g.name(e.caller));
      ++per_file[std::string(g.path(e.file))];
      raw_total += e.multiplicity;
      CHECK(e.multiplicity >= 1);
    }
    CHECK(raw_total == g.raw_edge_count());
    CHECK(raw_total == raw.size());
    std::size_t union_size = 0;
    for (std::uint32_t i = 0; i < g.files().size(); ++i) {
      const auto in_file = g.edges_in_file(FileId{i});
      union_size += in_file.size();
      CHECK(in_file.size() == per_file[std::string(g.path(FileId{i}))]);
    }
    CHECK(union_size == g.edges().size());
    for (std::uint32_t i = 0; i < g.function_count(); ++i) {
      const std::string n(g.name(FunctionId{i}));
      const auto callees = g.callees_of(FunctionId{i});
      const auto callers = g.callers_of(FunctionId{i});
      CHECK(callees.size() == fwd[n].size());
      CHECK(callers.size() == rev[n].size());
      CHECK(testing::names_of(g, callees) == fwd[n]);
      CHECK(testing::names_of(g, callers) == rev[n]);
      // Transpose identity.
      for (auto c : callees) {
        const auto back = g.callers_of(c);
        CHECK(std::find(back.begin(), back.end(), FunctionId{i}) != back.end());
      }
    }
  }
}

TEST_CASE("lookup counter counts index accesses") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("a", "b")};
  g.add_edges(batch);
  const auto before = g.lookup_count();
  g.callees_of(FunctionId{0});
  g.callers_of(FunctionId{1});
  CHECK(g.lookup_count() == before + 2);
}

TEST_CASE("copies are independent and keep names valid") {
  CallGraph g;
  const std::vector<RawEdge> batch = {edge("alpha", "beta")};
  g.add_edges(batch);
  CallGraph copy = g;
  const std::vector<RawEdge> more = {edge("beta", "gamma")};
  g.add_edges(more);
  CHECK(copy.edges().size() == 1);
  CHECK(copy.find_function("alpha").has_value());
  CHECK_FALSE(copy.find_function("gamma").has_value());
  CallGraph moved = std::move(copy);
  CHECK(moved.name(*moved.find_function("beta")) == "beta");
}
