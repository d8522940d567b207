#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "parmc/oracle.hpp"
#include "support.hpp"

using namespace parmc;

TEST_CASE("brute force: examples") {
  auto tri = oracle::brute_force_optimum(testing::triangle());
  CHECK(tri.optimum_cost == -1.0);
  CHECK(clustering_cost(testing::triangle(), tri.optimum_labeling) == -1.0);

  auto rep = oracle::brute_force_optimum(WeightedGraph(2, {{0, 1, -3.0}}));
  CHECK(rep.optimum_cost == -3.0);
  CHECK(rep.optimum_labeling.cluster_of == std::vector<ClusterId>{0, 1});

  auto att = oracle::brute_force_optimum(WeightedGraph(2, {{0, 1, 3.0}}));
  CHECK(att.optimum_cost == 0.0);
  CHECK(att.optimum_labeling.cluster_of == std::vector<ClusterId>{0, 0});

  CHECK(oracle::brute_force_optimum(WeightedGraph(0, {})).optimum_cost == 0.0);
  CHECK_THROWS_AS(oracle::brute_force_optimum(WeightedGraph(13, {})), std::invalid_argument);
}

TEST_CASE("brute force: no sampled labeling does better") {
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 8; ++n) {
    auto g = testing::random_graph(rng, n, 1.0);
    auto best = oracle::brute_force_optimum(g);
    CHECK(best.optimum_cost == clustering_cost(g, best.optimum_labeling));
    for (int rep = 0; rep < 200; ++rep) {
      CHECK(clustering_cost(g, testing::random_labels(rng, n, n)) >= best.optimum_cost - 1e-12);
    }
  }
}

TEST_CASE("brute force: invariant under node permutation") {
  std::mt19937_64 rng(2);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t n = 3 + rng() % 6;
    auto g = testing::random_graph(rng, n, 0.6);
    std::vector<NodeId> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Edge> moved;
    for (const auto& e : g.edges()) moved.push_back({perm[e.u], perm[e.v], e.cost});
    WeightedGraph h(n, moved);
    CHECK(std::abs(oracle::brute_force_optimum(g).optimum_cost -
                   oracle::brute_force_optimum(h).optimum_cost) <= 1e-9);
  }
}

TEST_CASE("naive_contract: examples") {
  WeightedGraph g(3, {{0, 1, 2.0}, {1, 2, 3.0}, {0, 2, -1.0}});
  auto id = oracle::naive_contract(g, {});
  CHECK(std::equal(id.graph.edges().begin(), id.graph.edges().end(), g.edges().begin(),
                   g.edges().end()));
  CHECK(id.joined_cost == 0.0);

  auto merged = oracle::naive_contract(g, {{1, 2}});
  CHECK(merged.graph.num_nodes() == 2);
  REQUIRE(merged.graph.num_edges() == 1);
  CHECK(merged.graph.edge(0) == Edge{0, 1, 1.0});
  CHECK(merged.joined_cost == 3.0);

  auto all = oracle::naive_contract(testing::triangle(), {{0, 1}, {1, 2}, {0, 2}});
  CHECK(all.graph.num_nodes() == 1);
  CHECK(all.graph.num_edges() == 0);
  CHECK(all.joined_cost == 0.0);
}

TEST_CASE("naive_gaec: examples") {
  auto tri = oracle::naive_gaec(testing::triangle());
  CHECK(tri.optimum_cost == -1.0);
  CHECK(tri.optimum_labeling.cluster_of == std::vector<ClusterId>{0, 0, 1});

  auto neg = oracle::naive_gaec(WeightedGraph(3, {{0, 1, -1.0}, {1, 2, -1.0}}));
  CHECK(neg.optimum_labeling.cluster_of == std::vector<ClusterId>{0, 1, 2});

  auto chain = oracle::naive_gaec(WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 2.0}}));
  CHECK(chain.optimum_cost == 0.0);
  CHECK(chain.optimum_labeling.num_clusters == 1);
}

TEST_CASE("exhaustive cycles: examples") {
  CHECK(oracle::enumerate_conflicted_cycles_exhaustive(testing::triangle(), 3).size() == 1);
  CHECK(oracle::enumerate_conflicted_cycles_exhaustive(
            WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}), 3)
            .empty());
  WeightedGraph square(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}, {0, 3, -1.0}});
  auto four = oracle::enumerate_conflicted_cycles_exhaustive(square, 4);
  REQUIRE(four.size() == 1);
  CHECK(four.begin()->nodes == std::vector<NodeId>{0, 1, 2, 3});
  CHECK_THROWS_AS(oracle::enumerate_conflicted_cycles_exhaustive(WeightedGraph(11, {}), 3),
                  std::invalid_argument);

  // Complete graph K4 with one repulsive edge (0,3): paths 0-1-3, 0-2-3,
  // 0-1-2-3, 0-2-1-3.
  WeightedGraph k4(4, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, -1.0}, {1, 2, 1.0}, {1, 3, 1.0},
                       {2, 3, 1.0}});
  CHECK(oracle::enumerate_conflicted_cycles_exhaustive(k4, 3).size() == 2);
  CHECK(oracle::enumerate_conflicted_cycles_exhaustive(k4, 4).size() == 4);
}
