#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parmc/graph.hpp"

namespace parmc {

enum class SolverMode {
  kPrimal,        // P: matching / spanning-forest contraction
  kPrimalDual,    // PD
  kPrimalDualPlus,  // PD+: PD with longer separated cycles
  kDual,          // D: lower bound only
  kGaec,          // greedy additive edge contraction
};

std::string_view to_string(SolverMode mode);
/// Accepts P, PD, PD+, D, GAEC. Throws std::invalid_argument otherwise.
SolverMode parse_mode(std::string_view name);

struct SolverConfig {
  SolverMode mode = SolverMode::kPrimalDual;
  /// Message-passing iterations per round.
  int mp_iterations = 5;
  /// Unset means 5 for PD and D, 7 for PD+.
  std::optional<int> max_cycle_length;
  double matching_switch_fraction = 0.1;
  int max_rounds = 100;
  /// Separation rounds in mode D. Later rounds separate on the
  /// reparametrized costs and keep existing multipliers.
  int dual_separation_rounds = 1;
  std::uint64_t seed = 0;
  /// < 1 selects all hardware threads.
  int threads = 0;

  int effective_cycle_length() const;
  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

struct RoundRecord {
  std::size_t round = 0;
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t triplets = 0;
  /// NaN when the round ran no message passing.
  double lower_bound = 0.0;
  /// Only the first dual round bounds the original problem.
  bool lower_bound_valid = false;
  std::size_t contracted = 0;
  std::string strategy;
  double elapsed_ms = 0.0;
};

struct Solution {
  Labeling labeling;
  double primal_cost = 0.0;
  /// -infinity for modes without a dual.
  double lower_bound = 0.0;
  std::vector<RoundRecord> trace;
};

Solution solve(const WeightedGraph& g, const SolverConfig& cfg);

/// Lower bound of mode D. Throws std::invalid_argument unless cfg.mode is D.
double dual_bound(const WeightedGraph& g, const SolverConfig& cfg);

}  // namespace parmc
