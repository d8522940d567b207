#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace parmc {

using NodeId = std::uint32_t;
using ClusterId = std::uint32_t;

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  double cost = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Endpoint pair without a cost, used for contraction sets.
struct NodePair {
  NodeId u = 0;
  NodeId v = 0;

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Undirected graph with signed edge costs. Positive costs are attractive,
/// negative costs repulsive.
///
/// The constructor canonicalizes its input: every edge is stored with u < v,
/// parallel edges are merged by summing their costs, and the edge list is
/// sorted lexicographically by (u, v). Zero-cost edges are kept.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  /// Throws std::invalid_argument on self-loops or out-of-range endpoints.
  WeightedGraph(std::size_t num_nodes, std::vector<Edge> edges);

  /// Adopts an edge list that is already canonical (u < v, sorted, no
  /// duplicates, in range). Only checked in debug builds.
  static WeightedGraph from_canonical(std::size_t num_nodes, std::vector<Edge> edges);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_[i]; }

  /// Index of edge {u, v} in edges(), or npos.
  std::size_t find_edge(NodeId u, NodeId v) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
};

/// Symmetric coordinate-format cost matrix, sorted by (row, col).
struct SparseAdjacency {
  std::size_t num_nodes = 0;
  std::vector<NodeId> rows;
  std::vector<NodeId> cols;
  std::vector<double> vals;

  std::size_t nnz() const { return vals.size(); }
};

/// Node partition. Cluster ids are dense and numbered in order of first
/// occurrence.
struct Labeling {
  std::vector<ClusterId> cluster_of;
  std::size_t num_clusters = 0;

  std::size_t size() const { return cluster_of.size(); }

  /// Renumbers arbitrary labels into canonical first-occurrence order.
  static Labeling canonical(std::span<const std::uint64_t> labels);
  static Labeling canonical(std::span<const ClusterId> labels);
  static Labeling singletons(std::size_t n);
  static Labeling single_cluster(std::size_t n);
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

WeightedGraph parse_instance(std::string_view text);
WeightedGraph read_instance(const std::filesystem::path& path);

/// Writes the MULTICUT text format, including a NODES header. Costs are
/// printed in shortest round-trip form.
std::string serialize_instance(const WeightedGraph& g);
void write_instance(const std::filesystem::path& path, const WeightedGraph& g);

SparseAdjacency build_adjacency(const WeightedGraph& g);

/// Graph holding the upper-triangular entries of a symmetric adjacency.
WeightedGraph adjacency_to_graph(const SparseAdjacency& adj);

/// Sum of the costs of edges whose endpoints lie in different clusters.
/// Throws std::invalid_argument when the labeling size differs from the
/// node count.
double clustering_cost(const WeightedGraph& g, const Labeling& lab);
double clustering_cost(const WeightedGraph& g, std::span<const ClusterId> cluster_of);

}  // namespace parmc
