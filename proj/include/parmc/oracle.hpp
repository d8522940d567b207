#pragma once

#include <set>
#include <vector>

#include "parmc/dual.hpp"
#include "parmc/graph.hpp"

// Reference implementations used to check the solver. Deliberately naive
// and independent of the contraction, dual and solver code.
namespace parmc::oracle {

inline constexpr std::size_t kMaxBruteForceNodes = 12;
inline constexpr std::size_t kMaxCycleEnumerationNodes = 10;

struct OracleResult {
  double optimum_cost = 0.0;
  Labeling optimum_labeling;
};

/// Exact minimum over all set partitions (restricted growth strings). The
/// first minimizer in enumeration order wins. Throws std::invalid_argument
/// above kMaxBruteForceNodes nodes.
OracleResult brute_force_optimum(const WeightedGraph& g);

struct NaiveContraction {
  WeightedGraph graph;
  double joined_cost = 0.0;
};

/// Merges the components of S by relabeling endpoints, dropping merged
/// edges into joined_cost and summing parallel edges in a map.
NaiveContraction naive_contract(const WeightedGraph& g, const std::vector<NodePair>& S);

/// Sequential greedy additive edge contraction with full rescans. Ties go
/// to the lexicographically smallest pair of cluster representatives.
OracleResult naive_gaec(const WeightedGraph& g);

/// All simple cycles of length <= max_len made of one repulsive edge and
/// otherwise attractive edges, each written starting at the smaller
/// endpoint of the repulsive edge and ending at the larger one. Throws
/// std::invalid_argument above kMaxCycleEnumerationNodes nodes.
std::set<ConflictedCycle> enumerate_conflicted_cycles_exhaustive(const WeightedGraph& g,
                                                                 std::size_t max_len);

}  // namespace parmc::oracle
