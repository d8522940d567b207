#pragma once

#include <cstdint>

#include "parmc/graph.hpp"

namespace parmc {

/// Erdos-Renyi G(n, p) with standard-normal costs. Pairs are visited in
/// lexicographic order, so the output depends only on (n, p, seed).
WeightedGraph generate_random(std::size_t n, double p, std::uint64_t seed);

struct GridOptions {
  std::size_t height = 0;
  std::size_t width = 0;
  /// Long-range edges join (r, c) to (r + stride, c) and (r, c + stride) for
  /// nodes with r and c divisible by stride. 0 disables them.
  std::size_t stride = 0;
  /// Means of the normal cost distributions (unit variance).
  double grid_mean = 0.5;
  double long_range_mean = -0.5;
};

/// 4-connected grid, node id r * width + c. Throws std::invalid_argument on
/// empty dimensions.
WeightedGraph generate_grid(const GridOptions& opts, std::uint64_t seed);

}  // namespace parmc
