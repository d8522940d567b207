#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "parmc/graph.hpp"

namespace parmc {

/// Cycle with exactly one repulsive edge, (nodes.front(), nodes.back()).
/// Consecutive nodes are joined by attractive edges and nodes.front() is the
/// smaller endpoint of the repulsive edge.
struct ConflictedCycle {
  std::vector<NodeId> nodes;

  std::size_t length() const { return nodes.size(); }
  friend bool operator==(const ConflictedCycle&, const ConflictedCycle&) = default;
  friend auto operator<=>(const ConflictedCycle&, const ConflictedCycle&) = default;
};

/// For every repulsive edge, a shortest (by hops) attractive path closing a
/// cycle of at most max_len edges. Paths come from a breadth-first search
/// out of the smaller endpoint that expands neighbors in ascending id order.
/// Output is ordered by repulsive edge. Throws std::invalid_argument when
/// max_len < 3.
std::vector<ConflictedCycle> separate_conflicted_cycles(const WeightedGraph& g,
                                                        std::size_t max_len,
                                                        unsigned threads = 1);

/// Cut patterns of a triangle as bit masks over (ij, ik, jk): bit 0 = ij,
/// bit 1 = ik, bit 2 = jk. Patterns cutting exactly one edge are infeasible.
inline constexpr std::array<std::uint8_t, 5> kTriangleLabelings = {0b000, 0b011, 0b101, 0b110,
                                                                   0b111};

struct Triplet {
  std::array<NodeId, 3> nodes;       // i < j < k
  std::array<std::uint32_t, 3> edges;  // augmented edge ids of ij, ik, jk
};

/// Triplet Lagrange decomposition over a graph augmented by zero-cost chords.
///
/// Multiplier lambda[3 * t + s] belongs to triplet t and its edge slot s
/// (0 = ij, 1 = ik, 2 = jk). The reparametrized edge cost is
/// c_e + sum of its multipliers; the reparametrized triplet cost of a cut
/// pattern y is -sum_s lambda[3t + s] * y_s.
class DualState {
 public:
  DualState() = default;
  explicit DualState(const WeightedGraph& g);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t num_original_edges() const { return num_original_edges_; }
  std::size_t num_triplets() const { return triplets_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const Triplet> triplets() const { return triplets_; }
  std::span<const double> lambda() const { return lambda_; }
  std::span<double> lambda() { return lambda_; }
  double& lambda(std::size_t t, int slot) { return lambda_[3 * t + slot]; }
  double lambda(std::size_t t, int slot) const { return lambda_[3 * t + slot]; }

  /// Number of triplets containing edge e.
  std::size_t coverage(std::size_t e) const { return offsets_[e + 1] - offsets_[e]; }
  /// Multiplier indices (3 * t + slot) attached to edge e, ascending.
  std::span<const std::uint32_t> incidence(std::size_t e) const {
    return std::span<const std::uint32_t>(incidence_).subspan(offsets_[e], coverage(e));
  }

  /// Edge id for {u, v}, or npos.
  std::size_t find_edge(NodeId u, NodeId v) const;

  double reparametrized_edge_cost(std::size_t e) const;
  std::vector<double> reparametrized_edge_costs(unsigned threads = 1) const;
  /// -lambda of the triplet, i.e. its cost coefficient per slot.
  std::array<double, 3> triplet_coefficients(std::size_t t) const;

  /// Adds the fan triangulation of each cycle anchored at nodes.front().
  /// Missing chords are appended with cost 0, duplicate triplets are skipped
  /// and new multipliers start at 0. Existing multipliers are untouched.
  void add_cycles(std::span<const ConflictedCycle> cycles);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  void rebuild_incidence();

  std::size_t num_nodes_ = 0;
  std::size_t num_original_edges_ = 0;
  std::vector<Edge> edges_;
  // Edge ids sorted by (u, v), for lookup.
  std::vector<std::uint32_t> sorted_edges_;
  std::vector<Triplet> triplets_;
  std::vector<std::array<NodeId, 3>> sorted_triples_;
  std::vector<double> lambda_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> incidence_;
};

/// Fresh dual state holding the triangulated cycles, all multipliers zero.
DualState triangulate(std::span<const ConflictedCycle> cycles, const WeightedGraph& g);

/// Cost of cut pattern y (bit mask over slots) under coefficients w.
inline double triangle_cost(const std::array<double, 3>& w, std::uint8_t y) {
  return ((y & 1) ? w[0] : 0.0) + ((y & 2) ? w[1] : 0.0) + ((y & 4) ? w[2] : 0.0);
}

/// min over feasible patterns with slot cut minus min with slot uncut.
double triangle_min_marginal(const std::array<double, 3>& coefficients, int slot);
double triangle_min_marginal(const DualState& state, std::size_t t, int slot);

/// Moves every covered edge's reparametrized cost onto its triplets in equal
/// shares. Edges are independent; `order` only permutes processing.
void mp_edge_to_triplets(DualState& state, unsigned threads = 1);
void mp_edge_to_triplets(DualState& state, std::span<const std::size_t> order);

/// Six damped triplet-to-edge updates per triplet.
void mp_triplets_to_edges(DualState& state, unsigned threads = 1);
void mp_triplets_to_edges(DualState& state, std::span<const std::size_t> order);

/// Edge phase followed by triplet phase.
void message_passing_iteration(DualState& state, unsigned threads = 1);

/// Lagrangean lower bound: sum_e min(0, c^lambda_e) + sum_t min_y c^lambda_t(y).
double lower_bound(const DualState& state, unsigned threads = 1);

/// Reparametrized objective of a node labeling (chords included). Equals the
/// clustering cost of the underlying graph for every multiplier vector.
double reparametrized_objective(const DualState& state, std::span<const ClusterId> cluster_of);

/// True iff the eps-optimal edge labels and triplet patterns contain a
/// non-empty arc-consistent kernel, found by pruning to a fixpoint.
bool check_edge_triangle_agreement(const DualState& state, double eps);

}  // namespace parmc
