#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "parmc/graph.hpp"
#include "support.hpp"

using namespace parmc;

namespace {

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  FAIL("expected a parse error");
  return 0;
}

}  // namespace

TEST_CASE("parse: single edge") {
  auto g = parse_instance("MULTICUT\n0 1 2.5\n");
  CHECK(g.num_nodes() == 2);
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0) == Edge{0, 1, 2.5});
}

TEST_CASE("parse: duplicate lines are summed") {
  auto g = parse_instance("MULTICUT\n0 1 1.0\n1 0 0.5\n");
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0) == Edge{0, 1, 1.5});
}

TEST_CASE("parse: comments, NODES, tabs and CRLF") {
  auto g = parse_instance("# a comment\r\nMULTICUT\r\nNODES 5\r\n2\t0\t-1e-3\r\n# mid\r\n3 4 +2\r\n");
  CHECK(g.num_nodes() == 5);
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edge(0) == Edge{0, 2, -1e-3});
  CHECK(g.edge(1) == Edge{3, 4, 2.0});
}

TEST_CASE("parse: zero-cost edges are kept") {
  auto g = parse_instance("MULTICUT\n0 1 0\n");
  REQUIRE(g.num_edges() == 1);
  CHECK(g.edge(0).cost == 0.0);
}

TEST_CASE("parse: header only") {
  auto g = parse_instance("MULTICUT\n");
  CHECK(g.num_nodes() == 0);
  CHECK(g.num_edges() == 0);
}

TEST_CASE("parse: errors name the line") {
  CHECK(parse_error_line("MULTICUT\n0 0 1.0\n") == 2);
  CHECK(parse_error_line("MULTICUT\n0 1 1.0\n2 x 1.0\n") == 3);
  CHECK(parse_error_line("MULTICUT\n-1 2 1.0\n") == 2);
  CHECK(parse_error_line("MULTICUT\n0 1\n") == 2);
  CHECK(parse_error_line("MULTICUT\n0 1 1.0 7\n") == 2);
  CHECK(parse_error_line("# c\n0 1 1.0\n") == 2);
  CHECK(parse_error_line("multicut\n") == 1);
  CHECK(parse_error_line("MULTICUT\nNODES 2\n0 2 1.0\n") == 3);
  CHECK(parse_error_line("") == 1);
}

TEST_CASE("graph: constructor canonicalizes and validates") {
  WeightedGraph g(4, {{3, 1, 1.0}, {0, 2, 2.0}, {1, 3, -0.5}});
  REQUIRE(g.num_edges() == 2);
  CHECK(g.edge(0) == Edge{0, 2, 2.0});
  CHECK(g.edge(1) == Edge{1, 3, 0.5});
  CHECK(g.find_edge(3, 1) == 1);
  CHECK(g.find_edge(0, 1) == WeightedGraph::npos);
  CHECK_THROWS_AS(WeightedGraph(2, {{1, 1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WeightedGraph(2, {{0, 2, 1.0}}), std::invalid_argument);
}

TEST_CASE("serialize: round trip") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = testing::random_graph(rng, 2 + rng() % 30, 0.3);
    auto h = parse_instance(serialize_instance(g));
    CHECK(h.num_nodes() == g.num_nodes());
    REQUIRE(h.num_edges() == g.num_edges());
    for (std::size_t i = 0; i < g.num_edges(); ++i) {
      CHECK(h.edge(i).u == g.edge(i).u);
      CHECK(h.edge(i).v == g.edge(i).v);
      CHECK(std::abs(h.edge(i).cost - g.edge(i).cost) <= 1e-12);
    }
  }
}

TEST_CASE("build_adjacency: examples") {
  auto a = build_adjacency(WeightedGraph(2, {{0, 1, 2.5}}));
  CHECK(a.rows == std::vector<NodeId>{0, 1});
  CHECK(a.cols == std::vector<NodeId>{1, 0});
  CHECK(a.vals == std::vector<double>{2.5, 2.5});

  auto empty = build_adjacency(WeightedGraph(3, {}));
  CHECK(empty.nnz() == 0);
  CHECK(empty.num_nodes == 3);

  auto b = build_adjacency(WeightedGraph(3, {{0, 1, 1.0}, {0, 2, -2.0}}));
  CHECK(b.rows == std::vector<NodeId>{0, 0, 1, 2});
  CHECK(b.cols == std::vector<NodeId>{1, 2, 0, 0});
  CHECK(b.vals == std::vector<double>{1.0, -2.0, 1.0, -2.0});
}

TEST_CASE("build_adjacency: sorted, symmetric, no diagonal") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    auto g = testing::random_graph(rng, 1 + rng() % 40, 0.2);
    auto a = build_adjacency(g);
    REQUIRE(a.nnz() == 2 * g.num_edges());
    for (std::size_t i = 0; i < a.nnz(); ++i) {
      CHECK(a.rows[i] != a.cols[i]);
      if (i > 0) {
        CHECK(std::pair(a.rows[i - 1], a.cols[i - 1]) < std::pair(a.rows[i], a.cols[i]));
      }
      auto e = g.find_edge(a.rows[i], a.cols[i]);
      REQUIRE(e != WeightedGraph::npos);
      CHECK(g.edge(e).cost == a.vals[i]);
    }
    auto back = adjacency_to_graph(a);
    CHECK(std::equal(back.edges().begin(), back.edges().end(), g.edges().begin(),
                     g.edges().end()));
  }
}

TEST_CASE("clustering_cost: triangle") {
  auto g = testing::triangle();
  CHECK(clustering_cost(g, Labeling::single_cluster(3)) == 0.0);
  CHECK(clustering_cost(g, std::vector<ClusterId>{0, 1, 1}) == -1.0);
  CHECK(clustering_cost(g, Labeling::singletons(3)) == 0.0);
  CHECK_THROWS_AS(clustering_cost(g, std::vector<ClusterId>{0, 1}), std::invalid_argument);
}

TEST_CASE("clustering_cost: one cluster is free, relabeling is irrelevant") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng() % 20;
    auto g = testing::random_graph(rng, n, 0.4);
    CHECK(clustering_cost(g, Labeling::single_cluster(n)) == 0.0);

    auto labels = testing::random_labels(rng, n, 5);
    std::vector<ClusterId> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto relabeled = labels;
    for (auto& l : relabeled) l = perm[l] + 100;
    CHECK(clustering_cost(g, labels) == clustering_cost(g, relabeled));
  }
}

TEST_CASE("Labeling::canonical numbers by first occurrence") {
  std::vector<std::uint64_t> raw = {7, 3, 7, 9, 3};
  auto lab = Labeling::canonical(std::span<const std::uint64_t>(raw));
  CHECK(lab.cluster_of == std::vector<ClusterId>{0, 1, 0, 2, 1});
  CHECK(lab.num_clusters == 3);
}
