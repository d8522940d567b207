#pragma once

#include <numeric>
#include <span>
#include <vector>

#include "parmc/graph.hpp"

namespace parmc::detail {

struct PositiveNeighbor {
  NodeId node;
  double cost;
};

/// Attractive neighborhoods in CSR form, each sorted by neighbor id.
class PositiveAdjacency {
 public:
  explicit PositiveAdjacency(const WeightedGraph& g) : offsets_(g.num_nodes() + 1, 0) {
    for (const auto& e : g.edges()) {
      if (e.cost <= 0.0) continue;
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    neighbors_.resize(offsets_.back());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Same ordering argument as build_adjacency: rows come out sorted.
    for (const auto& e : g.edges()) {
      if (e.cost <= 0.0) continue;
      neighbors_[cursor[e.u]++] = {e.v, e.cost};
      neighbors_[cursor[e.v]++] = {e.u, e.cost};
    }
  }

  std::span<const PositiveNeighbor> of(NodeId v) const {
    return std::span<const PositiveNeighbor>(neighbors_).subspan(offsets_[v],
                                                                 offsets_[v + 1] - offsets_[v]);
  }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<PositiveNeighbor> neighbors_;
};

}  // namespace parmc::detail
