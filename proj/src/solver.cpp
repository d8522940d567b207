#include "parmc/solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parmc/contraction.hpp"
#include "parmc/dual.hpp"
#include "parmc/parallel.hpp"

namespace parmc {

std::string_view to_string(SolverMode mode) {
  switch (mode) {
    case SolverMode::kPrimal: return "P";
    case SolverMode::kPrimalDual: return "PD";
    case SolverMode::kPrimalDualPlus: return "PD+";
    case SolverMode::kDual: return "D";
    case SolverMode::kGaec: return "GAEC";
  }
  return "?";
}

SolverMode parse_mode(std::string_view name) {
  if (name == "P") return SolverMode::kPrimal;
  if (name == "PD") return SolverMode::kPrimalDual;
  if (name == "PD+") return SolverMode::kPrimalDualPlus;
  if (name == "D") return SolverMode::kDual;
  if (name == "GAEC") return SolverMode::kGaec;
  throw std::invalid_argument("unknown solver mode '" + std::string(name) +
                              "' (expected P, PD, PD+, D or GAEC)");
}

int SolverConfig::effective_cycle_length() const {
  if (max_cycle_length) return *max_cycle_length;
  return mode == SolverMode::kPrimalDualPlus ? 7 : 5;
}

void SolverConfig::validate() const {
  const bool uses_dual = mode == SolverMode::kPrimalDual ||
                         mode == SolverMode::kPrimalDualPlus || mode == SolverMode::kDual;
  if (uses_dual && mp_iterations < 1) {
    throw std::invalid_argument("mp_iterations must be at least 1");
  }
  if (effective_cycle_length() < 3) {
    throw std::invalid_argument("max_cycle_length must be at least 3");
  }
  if (effective_cycle_length() > 255) {
    throw std::invalid_argument("max_cycle_length must be at most 255");
  }
  if (!(matching_switch_fraction > 0.0 && matching_switch_fraction <= 1.0)) {
    throw std::invalid_argument("matching_switch_fraction must lie in (0, 1]");
  }
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  if (dual_separation_rounds < 1) {
    throw std::invalid_argument("dual_separation_rounds must be at least 1");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Graph over the augmented edges of a dual state with reparametrized costs.
WeightedGraph reparametrized_graph(const DualState& state, unsigned threads) {
  auto costs = state.reparametrized_edge_costs(threads);
  std::vector<Edge> edges(state.edges().begin(), state.edges().end());
  for (std::size_t e = 0; e < edges.size(); ++e) edges[e].cost = costs[e];
  return WeightedGraph(state.num_nodes(), std::move(edges));
}

class Driver {
 public:
  Driver(const WeightedGraph& g, const SolverConfig& cfg)
      : original_(g), cfg_(cfg), threads_(resolve_threads(cfg.threads)) {
    step_opts_.switch_fraction = cfg.matching_switch_fraction;
    step_opts_.matching.seed = cfg.seed;
    step_opts_.threads = threads_;
  }

  Solution run() {
    mapping_ = ContractionMapping::identity(original_.num_nodes());
    lower_bound_ = -std::numeric_limits<double>::infinity();
    switch (cfg_.mode) {
      case SolverMode::kGaec: run_gaec(original_, "gaec"); break;
      case SolverMode::kPrimal: run_primal(); break;
      case SolverMode::kPrimalDual:
      case SolverMode::kPrimalDualPlus: run_primal_dual(); break;
      case SolverMode::kDual: run_dual(); break;
    }
    Solution out;
    out.labeling = Labeling::canonical(std::span<const NodeId>(mapping_.map));
    out.primal_cost = clustering_cost(original_, out.labeling);
    out.lower_bound = lower_bound_;
    out.trace = std::move(trace_);
    return out;
  }

  double run_dual_only() {
    run_dual();
    return lower_bound_;
  }

 private:
  RoundRecord& open_round(const WeightedGraph& g) {
    RoundRecord r;
    r.round = trace_.size() + 1;
    r.nodes = g.num_nodes();
    r.edges = g.num_edges();
    r.lower_bound = std::numeric_limits<double>::quiet_NaN();
    trace_.push_back(r);
    return trace_.back();
  }

  void run_gaec(const WeightedGraph& g, std::string_view label) {
    const auto start = Clock::now();
    RoundRecord& rec = open_round(g);
    auto f = greedy_additive_contraction(g);
    rec.contracted = g.num_nodes() - f.num_targets;
    rec.strategy = std::string(label);
    mapping_ = compose(mapping_, f);
    rec.elapsed_ms = ms_since(start);
  }

  void run_primal() {
    WeightedGraph g = original_;
    step_opts_.policy = ContractionPolicy::kAuto;
    for (;;) {
      const auto start = Clock::now();
      auto step = contraction_step(g, step_opts_);
      RoundRecord& rec = open_round(g);
      rec.contracted = g.num_nodes() - step.mapping.num_targets;
      rec.strategy = std::string(to_string(step.used));
      rec.elapsed_ms = ms_since(start);
      if (step.selected == 0) break;
      mapping_ = compose(mapping_, step.mapping);
      g = std::move(step.graph);
    }
  }

  void run_primal_dual() {
    WeightedGraph g = original_;
    step_opts_.policy = ContractionPolicy::kAuto;
    const auto max_len = static_cast<std::size_t>(cfg_.effective_cycle_length());
    for (int round = 1; round <= cfg_.max_rounds; ++round) {
      const auto start = Clock::now();
      auto cycles = separate_conflicted_cycles(g, max_len, threads_);
      DualState state = triangulate(cycles, g);
      for (int it = 0; it < cfg_.mp_iterations; ++it) message_passing_iteration(state, threads_);
      const double lb = lower_bound(state, threads_);
      if (round == 1) lower_bound_ = lb;

      WeightedGraph reparametrized = reparametrized_graph(state, threads_);
      auto step = contraction_step(reparametrized, step_opts_);

      RoundRecord& rec = open_round(g);
      rec.triplets = state.num_triplets();
      rec.lower_bound = lb;
      rec.lower_bound_valid = round == 1;
      rec.contracted = g.num_nodes() - step.mapping.num_targets;
      rec.strategy = std::string(to_string(step.used));
      rec.elapsed_ms = ms_since(start);
      if (step.selected == 0) break;
      mapping_ = compose(mapping_, step.mapping);
      g = std::move(step.graph);
    }
    // Greedy cleanup on the quotient of the original costs.
    auto quotient = contract_graph(original_, mapping_, threads_);
    run_gaec(quotient.graph, "gaec_cleanup");
  }

  void run_dual() {
    const auto start = Clock::now();
    const auto max_len = static_cast<std::size_t>(cfg_.effective_cycle_length());
    DualState state = triangulate(separate_conflicted_cycles(original_, max_len, threads_),
                                  original_);
    for (int it = 0; it < cfg_.mp_iterations; ++it) message_passing_iteration(state, threads_);
    for (int extra = 1; extra < cfg_.dual_separation_rounds; ++extra) {
      auto cycles = separate_conflicted_cycles(reparametrized_graph(state, threads_), max_len,
                                               threads_);
      const std::size_t before = state.num_triplets();
      state.add_cycles(cycles);
      if (state.num_triplets() == before) break;
      for (int it = 0; it < cfg_.mp_iterations; ++it) message_passing_iteration(state, threads_);
    }
    lower_bound_ = lower_bound(state, threads_);
    RoundRecord& rec = open_round(original_);
    rec.triplets = state.num_triplets();
    rec.lower_bound = lower_bound_;
    rec.lower_bound_valid = true;
    rec.strategy = "dual";
    rec.elapsed_ms = ms_since(start);
  }

  const WeightedGraph& original_;
  SolverConfig cfg_;
  unsigned threads_;
  StepOptions step_opts_;
  ContractionMapping mapping_;
  double lower_bound_ = 0.0;
  std::vector<RoundRecord> trace_;
};

}  // namespace

Solution solve(const WeightedGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  return Driver(g, cfg).run();
}

double dual_bound(const WeightedGraph& g, const SolverConfig& cfg) {
  cfg.validate();
  if (cfg.mode != SolverMode::kDual) {
    throw std::invalid_argument("dual_bound requires mode D");
  }
  return Driver(g, cfg).run_dual_only();
}

}  // namespace parmc
