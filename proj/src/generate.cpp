#include "parmc/generate.hpp"

#include <random>
#include <stdexcept>

namespace parmc {

WeightedGraph generate_random(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> cost(0.0, 1.0);
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (coin(rng) < p) {
        edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v), cost(rng)});
      }
    }
  }
  return WeightedGraph(n, std::move(edges));
}

WeightedGraph generate_grid(const GridOptions& opts, std::uint64_t seed) {
  if (opts.height == 0 || opts.width == 0) {
    throw std::invalid_argument("grid dimensions must be positive");
  }
  const std::size_t h = opts.height;
  const std::size_t w = opts.width;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> local(opts.grid_mean, 1.0);
  std::normal_distribution<double> far(opts.long_range_mean, 1.0);
  auto id = [&](std::size_t r, std::size_t c) { return static_cast<NodeId>(r * w + c); };

  std::vector<Edge> edges;
  edges.reserve(2 * h * w);
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (c + 1 < w) edges.push_back({id(r, c), id(r, c + 1), local(rng)});
      if (r + 1 < h) edges.push_back({id(r, c), id(r + 1, c), local(rng)});
    }
  }
  const std::size_t s = opts.stride;
  if (s > 0) {
    for (std::size_t r = 0; r < h; r += s) {
      for (std::size_t c = 0; c < w; c += s) {
        if (c + s < w) edges.push_back({id(r, c), id(r, c + s), far(rng)});
        if (r + s < h) edges.push_back({id(r, c), id(r + s, c), far(rng)});
      }
    }
  }
  return WeightedGraph(h * w, std::move(edges));
}

}  // namespace parmc
