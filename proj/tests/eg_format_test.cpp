#include <doctest.h>

#include "cgoracle/eg_format.hpp"
#include "oracle.hpp"

using namespace cgoracle;

TEST_CASE("single edge with style") {
  const auto out = parse_eg_text("digraph callgraph { \"main\" -> \"foo\" [style=solid]; }", "a.c");
  REQUIRE(out.edges.size() == 1);
  CHECK(out.edges[0] == RawEdge{"main", "foo", EdgeStyle::solid, "a.c"});
  CHECK(out.missing_style == 0);
}

TEST_CASE("empty graph") {
  CHECK(parse_eg_text("digraph callgraph { }", "a.c").edges.empty());
}

TEST_CASE("node declarations produce no edges") {
  const auto out =
      parse_eg_text("digraph callgraph { \"lone\"; \"a\" -> \"b\" [style=dotted]; }", "m.c");
  REQUIRE(out.edges.size() == 1);
  CHECK(out.edges[0] == RawEdge{"a", "b", EdgeStyle::dotted, "m.c"});
}

TEST_CASE("underscored names are re-attached") {
  const auto out =
      parse_eg_text("digraph callgraph {\"__kmalloc\" -> \"_x_\" [style=solid];}", "mm/slab.c");
  REQUIRE(out.edges.size() == 1);
  CHECK(out.edges[0].source == "__kmalloc");
  CHECK(out.edges[0].dest == "_x_");
}

TEST_CASE("style after an edge is optional but counted") {
  const auto out = parse_eg_text(R"(digraph callgraph { "a" -> "b" "c" -> "d" [style=solid]; })",
                                 "f.c");
  REQUIRE(out.edges.size() == 2);
  CHECK(out.edges[0].style == EdgeStyle::unspecified);
  CHECK(out.edges[1].style == EdgeStyle::solid);
  CHECK(out.missing_style == 1);
}

TEST_CASE("standalone style descriptor parses") {
  const auto out = parse_eg_text(R"(digraph callgraph { [style=dotted]; "a"; })", "f.c");
  CHECK(out.edges.empty());
}

TEST_CASE("parse errors carry the offending token position") {
  struct Case {
    const char* text;
    std::uint32_t line, column;
  };
  const Case cases[] = {
      {"graph callgraph {}", 1, 1},
      {"digraph callgraph {\n\"a\" -> ;\n}", 2, 8},
      {"digraph callgraph { \"a\" -> \"b\" [style=bold]; }", 1, 39},
      {"digraph callgraph { \"a\" }", 1, 25},
      {"digraph callgraph { \"\" ; }", 1, 22},
      {"digraph callgraph { }  }", 1, 24},
      {"digraph callgraph { \"a\";", 1, 25},
  };
  for (const auto& c : cases) {
    CAPTURE(c.text);
    try {
      parse_eg_text(c.text, "f.c");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.line() == c.line);
      CHECK(e.column() == c.column);
    }
  }
}

TEST_CASE("format then parse round-trips") {
  testing::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    std::vector<RawEdge> edges(rng() % 30);
    for (auto& e : edges) {
      e.source = testing::random_function_name(rng);
      e.dest = testing::random_function_name(rng);
      e.style = static_cast<EdgeStyle>(rng() % 3);
      e.file = "dir/file.c";
    }
    CHECK(parse_eg_text(format_eg(edges), "dir/file.c").edges == edges);
  }
}

TEST_CASE("random derivations parse to their edges") {
  testing::Rng rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto d = testing::random_derivation(rng, 25, "k.c");
    CAPTURE(d.text);
    CHECK(parse_eg_text(d.text, "k.c").edges == d.edges);
  }
}

TEST_CASE("error position marks the end of the longest viable prefix") {
  // Inject one stray token into a valid derivation. The prefix before the
  // reported token must still be viable (it fails only at end of input),
  // while the prefix including it must fail at that token.
  testing::Rng rng(13);
  const std::vector<Token> junk = {
      {TokenKind::punctuation, ";", 0, 0}, {TokenKind::punctuation, ">", 0, 0},
      {TokenKind::quote, "\"", 0, 0},       {TokenKind::identifier, "zz", 0, 0},
      {TokenKind::keyword, "style", 0, 0},  {TokenKind::punctuation, "}", 0, 0}};
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    auto tokens = tokenize(testing::random_derivation(rng, 10, "p.c").text);
    const auto at = rng() % (tokens.size() + 1);
    Token stray = junk[rng() % junk.size()];
    tokens.insert(tokens.begin() + static_cast<std::ptrdiff_t>(at), stray);
    for (std::size_t k = 0; k < tokens.size(); ++k) {
      tokens[k].line = 1;
      tokens[k].column = static_cast<std::uint32_t>(k + 1);
    }
    std::size_t bad = 0;
    try {
      parse_eg(tokens, "p.c");
      continue;  // the stray token happened to fit
    } catch (const SyntaxError& e) {
      bad = e.column() - 1;
    }
    ++checked;
    if (bad < tokens.size()) {
      std::span<const Token> before(tokens.data(), bad);
      try {
        parse_eg(before, "p.c");
      } catch (const SyntaxError& e) {
        CHECK(e.detail().find("end of input") != std::string::npos);
      }
      std::span<const Token> through(tokens.data(), bad + 1);
      CHECK_THROWS_AS(parse_eg(through, "p.c"), SyntaxError);
      try {
        parse_eg(through, "p.c");
      } catch (const SyntaxError& e) {
        CHECK(e.column() - 1 == bad);
      }
    }
  }
  CHECK(checked > 300);
}

TEST_CASE("function name validity") {
  CHECK(is_valid_function_name("__kmalloc"));
  CHECK(is_valid_function_name("a_b_"));
  CHECK(is_valid_function_name("9p"));
  CHECK_FALSE(is_valid_function_name("__"));
  CHECK_FALSE(is_valid_function_name(""));
  CHECK_FALSE(is_valid_function_name("foo.part.0"));
}
