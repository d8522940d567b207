#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "parmc/graph.hpp"

namespace parmc::testing {

/// G(n, p) with normal costs; a test-local generator so that tests do not
/// depend on the library's instance generator.
inline WeightedGraph random_graph(std::mt19937_64& rng, std::size_t n, double p,
                                  double mean = 0.0) {
  std::bernoulli_distribution coin(p);
  std::normal_distribution<double> cost(mean, 1.0);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.push_back({u, v, cost(rng)});
    }
  }
  return WeightedGraph(n, std::move(edges));
}

/// Random subset of the graph's edges as node pairs.
inline std::vector<NodePair> random_edge_subset(std::mt19937_64& rng, const WeightedGraph& g,
                                                double p) {
  std::bernoulli_distribution coin(p);
  std::vector<NodePair> s;
  for (const auto& e : g.edges()) {
    if (coin(rng)) s.push_back({e.u, e.v});
  }
  return s;
}

inline std::vector<ClusterId> random_labels(std::mt19937_64& rng, std::size_t n,
                                            std::size_t max_clusters) {
  std::uniform_int_distribution<ClusterId> pick(0, static_cast<ClusterId>(max_clusters - 1));
  std::vector<ClusterId> labels(n);
  for (auto& l : labels) l = pick(rng);
  return labels;
}

inline WeightedGraph triangle() {
  return WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, -2.0}});
}

}  // namespace parmc::testing
