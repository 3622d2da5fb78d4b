#include <sstream>

#include "doctest.h"
#include "rpa/bench.hpp"
#include "rpa/dag.hpp"
#include "support.hpp"

using namespace rpa;
namespace ts = testsupport;

TEST_CASE("build_graph on the trace fixture") {
  Radag g = build_graph(ts::trace_edges());
  CHECK(g.vertex_count() == 16);
  CHECK(g.root() == "a");
  CHECK_FALSE(g.has_virtual_root());
  CHECK(g.successors("c") == std::vector<VertexId>{"d", "n"});
  CHECK(g.successors("n") == std::vector<VertexId>{"o", "i"});
  CHECK(g.predecessors("i") == std::vector<VertexId>{"h", "n"});
  CHECK(g.leaves() == std::vector<VertexId>{"g", "k", "m", "p"});
}

TEST_CASE("build_graph basics") {
  SUBCASE("single edge") {
    Radag g = build_graph({{"x", "y"}});
    CHECK(g.root() == "x");
    CHECK(g.leaves() == std::vector<VertexId>{"y"});
  }
  SUBCASE("two roots get a virtual root") {
    Radag g = build_graph({{"a", "b"}, {"c", "b"}});
    CHECK(g.root() == kVirtualRootId);
    CHECK(g.has_virtual_root());
    CHECK(g.successors(kVirtualRootId) == std::vector<VertexId>{"a", "c"});
  }
  SUBCASE("duplicate edges are tolerated") {
    Radag g = build_graph({{"a", "b"}, {"a", "b"}, {"b", "c"}});
    CHECK(g.successors("a") == std::vector<VertexId>{"b"});
    CHECK(g.predecessors("b") == std::vector<VertexId>{"a"});
  }
  SUBCASE("empty input") {
    CHECK_THROWS_AS(build_graph({}), EmptyGraph);
    Radag g = build_graph({}, VertexId("solo"));
    CHECK(g.root() == "solo");
    CHECK(g.leaves() == std::vector<VertexId>{"solo"});
  }
  SUBCASE("cycle reported with its vertices") {
    try {
      build_graph({{"a", "b"}, {"b", "c"}, {"c", "a"}, {"r", "a"}});
      FAIL("expected CycleDetected");
    } catch (const CycleDetected& e) {
      CHECK(e.cycle().size() >= 3);
      CHECK(e.cycle().front() == e.cycle().back());
    }
  }
  SUBCASE("all-cyclic graph has no root") {
    CHECK_THROWS_AS(build_graph({{"a", "b"}, {"b", "a"}}), CycleDetected);
  }
}

TEST_CASE("distance table on the trace fixture") {
  Radag g = build_graph(ts::trace_edges());
  DistanceTable table = compute_distance_table(g, ts::trace_leaves());

  CHECK(table.dist("a", "p") == 5);
  CHECK(table.dist("n", "k") == 3);
  CHECK(table.dist("p", "p") == 0);
  CHECK(table.dist("m", "m") == 0);
  CHECK(table.dist("o", "k") == DistanceTable::kUnreachable);

  CHECK(table.shortest_path("a", "p") == std::vector<VertexId>{"a", "b", "c", "n", "o", "p"});
  CHECK(table.shortest_path("c", "g") == std::vector<VertexId>{"c", "d", "e", "f", "g"});
  CHECK(table.shortest_path("p", "p") == std::vector<VertexId>{"p"});
  CHECK_THROWS_AS(table.shortest_path("o", "k"), Unreachable);
  CHECK_THROWS_AS(table.dist("nope", "p"), UnknownVertex);
  CHECK_THROWS_AS(compute_distance_table(g, {"nope"}), UnknownVertex);
}

TEST_CASE("reachable_from") {
  Radag g = build_graph(ts::trace_edges());
  auto sorted = [](std::vector<VertexId> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  CHECK(sorted(g.reachable_from("o")) == std::vector<VertexId>{"o", "p"});
  CHECK(sorted(g.reachable_from("i")) == std::vector<VertexId>{"i", "j", "k", "l", "m"});
  CHECK(g.reachable_from("p") == std::vector<VertexId>{"p"});
  CHECK_THROWS_AS(g.reachable_from("nope"), UnknownVertex);
}

TEST_CASE("tombstoned vertices are skipped by traversals") {
  Radag g = build_graph(ts::trace_edges());
  g.tombstone("o");
  g.tombstone("p");
  for (const auto& v : g.reachable_from("a")) {
    CHECK(v != "o");
    CHECK(v != "p");
  }
  // n's only live successor is i now, so n is not a leaf; p is gone.
  CHECK(g.leaves() == std::vector<VertexId>{"g", "k", "m"});
  g.tombstone("i");
  CHECK(g.reachable_from("h") == std::vector<VertexId>{"h"});
  CHECK(g.is_sink("h"));
}

TEST_CASE("distance table matches an independent floodfill on random graphs") {
  // 1000 seeded instances, up to 200 vertices.
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    GeneratorParams params;
    params.n_vertices = 2 + seed % 199;
    params.branch_prob = (seed % 7) / 10.0;
    params.merge_prob = (seed % 5) / 10.0;
    params.n_regressions = 1 + seed % 4;
    params.repair_prob = (seed % 2) ? 0.3 : 0.0;
    BenchmarkInstance instance = generate_random_radag(params, seed);
    const Radag& g = instance.graph;
    auto edges = ts::edges_of(g);
    DistanceTable table(g, instance.invalid_leaves);

    for (const auto& leaf : instance.invalid_leaves) {
      auto reference = ts::reference_distances(edges, leaf);
      for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexId& v = g.vertex_at(i);
        std::size_t got = table.dist(v, leaf);
        if (reference.count(v)) {
          REQUIRE(got == reference.at(v));
        } else {
          REQUIRE(got == DistanceTable::kUnreachable);
        }
        // Path shape: dist+1 vertices, consecutive pairs are edges.
        if (got != DistanceTable::kUnreachable) {
          auto path = table.shortest_path(v, leaf);
          REQUIRE(path.size() == got + 1);
          for (std::size_t k = 0; k + 1 < path.size(); ++k) {
            auto succs = g.successors(path[k]);
            REQUIRE(std::find(succs.begin(), succs.end(), path[k + 1]) != succs.end());
          }
        }
      }
    }
  }
}

TEST_CASE("graph file format") {
  SUBCASE("parse the fixture text") {
    std::istringstream in(ts::trace_graph_text());
    Radag g = parse_graph(in);
    CHECK(g.vertex_count() == 16);
    CHECK(g.root() == "a");
    CHECK(same_structure(g, build_graph(ts::trace_edges())));
  }
  SUBCASE("parse, serialize, parse is stable") {
    std::istringstream in(ts::trace_graph_text());
    Radag first = parse_graph(in);
    std::string text = serialize_graph(first);
    std::istringstream again(text);
    Radag second = parse_graph(again);
    CHECK(same_structure(first, second));
    CHECK(serialize_graph(second) == text);
  }
  SUBCASE("bare line declares a root") {
    std::istringstream in("r\nchild r\n");
    Radag g = parse_graph(in);
    CHECK(g.root() == "r");
    CHECK(g.leaves() == std::vector<VertexId>{"child"});
  }
  SUBCASE("multi-root file round-trips through the virtual root") {
    std::istringstream in("b a\nb c\n");  // b has parents a and c
    Radag g = parse_graph(in);
    CHECK(g.has_virtual_root());
    std::istringstream again(serialize_graph(g));
    CHECK(same_structure(g, parse_graph(again)));
  }
  SUBCASE("comments and blank lines") {
    std::istringstream in("# heading\n\nx\ny x # trailing note\n");
    Radag g = parse_graph(in);
    CHECK(g.vertex_count() == 2);
  }
  SUBCASE("self edge is rejected with its line number") {
    std::istringstream in("a\nb b\n");
    try {
      parse_graph(in);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number() == 2);
    }
  }
}

TEST_CASE("generated instances re-load identically from bundle files") {
  GeneratorParams params;
  params.n_vertices = 60;
  for (std::uint64_t seed : {7u, 8u, 9u}) {
    BenchmarkInstance instance = generate_random_radag(params, seed);
    std::string graph_text = serialize_graph(instance.graph);
    std::istringstream in(graph_text);
    Radag reparsed = parse_graph(in);
    CHECK(same_structure(instance.graph, reparsed));
    CHECK(serialize_graph(reparsed) == graph_text);
  }
}
