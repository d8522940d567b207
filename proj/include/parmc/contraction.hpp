#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "parmc/graph.hpp"

namespace parmc {

/// Surjective relabeling of nodes onto 0..num_targets-1. Target ids are
/// numbered in order of their smallest source node.
struct ContractionMapping {
  std::vector<NodeId> map;
  std::size_t num_targets = 0;

  std::size_t num_sources() const { return map.size(); }

  static ContractionMapping identity(std::size_t n);
};

/// Mapping v -> second(first(v)).
ContractionMapping compose(const ContractionMapping& first, const ContractionMapping& second);

struct ContractionResult {
  SparseAdjacency contracted;
  ContractionMapping mapping;
  /// Total cost of edges whose endpoints were merged into one node.
  double joined_cost = 0.0;
};

/// Canonical component labeling of (V, S). Throws std::invalid_argument if an
/// endpoint is out of range.
ContractionMapping connected_components(std::size_t num_nodes, std::span<const NodePair> edges);

/// Contracts a symmetric adjacency by relabeling every entry, sorting by the
/// new (row, col) key and summing runs of equal keys. Entries that land on
/// the diagonal are dropped from the result and accumulated into joined_cost.
/// Output is identical for every thread count.
ContractionResult contract(const SparseAdjacency& adj, const ContractionMapping& f,
                           unsigned threads = 1);

/// Same relabel-sort-reduce applied to the edge list of a graph.
struct GraphContraction {
  WeightedGraph graph;
  double joined_cost = 0.0;
};
GraphContraction contract_graph(const WeightedGraph& g, const ContractionMapping& f,
                                unsigned threads = 1);

/// Strictly positive edge of maximum cost, lexicographically smallest on
/// ties; empty if no edge is attractive.
std::vector<NodePair> select_max_edge(const WeightedGraph& g);

struct MatchingOptions {
  int rounds = 5;
  /// Perturbs proposal tie-breaks with a seeded hash. Off by default.
  bool jitter = false;
  std::uint64_t seed = 0;
};

/// Handshake matching on attractive edges: each unmatched node proposes to
/// its best unmatched attractive neighbor, mutual proposals are matched.
std::vector<NodePair> select_matching(const WeightedGraph& g, const MatchingOptions& opts = {},
                                      unsigned threads = 1);

/// Maximum spanning forest of the attractive edges with every forest path
/// between the endpoints of a repulsive edge broken at its cheapest edge.
std::vector<NodePair> select_spanning_forest_no_conflicts(const WeightedGraph& g);

enum class ContractionPolicy { kGaec, kMatching, kSpanningForest, kAuto };

std::string_view to_string(ContractionPolicy p);

struct StepOptions {
  ContractionPolicy policy = ContractionPolicy::kAuto;
  /// Auto policy falls back to the spanning forest when the matching has
  /// fewer than this fraction of the current node count.
  double switch_fraction = 0.1;
  MatchingOptions matching;
  unsigned threads = 1;
};

struct StepResult {
  WeightedGraph graph;
  ContractionMapping mapping;
  double joined_cost = 0.0;
  std::size_t selected = 0;
  ContractionPolicy used = ContractionPolicy::kAuto;
};

/// One round of selection and contraction. An empty selection returns the
/// input graph with the identity mapping.
StepResult contraction_step(const WeightedGraph& g, const StepOptions& opts);

/// Greedy additive edge contraction run to exhaustion. Produces the same
/// partition as repeating contraction_step with the GAEC policy until the
/// selection is empty, using a priority queue instead of full rescans.
ContractionMapping greedy_additive_contraction(const WeightedGraph& g);

}  // namespace parmc
