// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "cli.hpp"
#include "parmc/contraction.hpp"
#include "parmc/dual.hpp"
#include "parmc/generate.hpp"
#include "parmc/oracle.hpp"
#include "parmc/solver.hpp"

using namespace parmc;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first failure message and counts checks.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && out_.pass) {
      out_.pass = false;
      out_.detail = what;
    }
    if (!ok) ++failures_;
  }
  Outcome finish(const std::string& summary) {
    if (out_.pass) {
      out_.detail = summary;
    } else {
      out_.detail += " (" + std::to_string(failures_) + " of " + std::to_string(checks_) +
                     " checks failed)";
    }
    return out_;
  }

 private:
  Outcome out_;
  std::size_t checks_ = 0;
  std::size_t failures_ = 0;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(12);
  s << x;
  return s.str();
}

SolverConfig mode_config(SolverMode mode, int k, int threads = 1) {
  SolverConfig cfg;
  cfg.mode = mode;
  cfg.mp_iterations = k;
  cfg.threads = threads;
  return cfg;
}

WeightedGraph small_graph(std::mt19937_64& rng, std::size_t lo, std::size_t hi, double p) {
  std::uniform_int_distribution<std::size_t> n(lo, hi);
  return generate_random(n(rng), p, rng());
}

DualState separated(const WeightedGraph& g, std::size_t max_len) {
  return triangulate(separate_conflicted_cycles(g, max_len), g);
}

WeightedGraph triangle() { return WeightedGraph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, -2.0}}); }

Outcome oracle_bracketing() {
  Checker c;
  std::mt19937_64 rng(1);
  const auto start = Clock::now();
  for (int i = 0; i < 200; ++i) {
    auto g = small_graph(rng, 4, 7, 0.6);
    const double opt = oracle::brute_force_optimum(g).optimum_cost;
    auto d = mode_config(SolverMode::kDual, 20);
    d.max_cycle_length = 5;
    const double lb = dual_bound(g, d);
    const double p = solve(g, mode_config(SolverMode::kPrimal, 5)).primal_cost;
    const double pd = solve(g, mode_config(SolverMode::kPrimalDual, 5)).primal_cost;
    c.expect(lb <= opt + 1e-6, "instance " + std::to_string(i) + ": bound " + fmt(lb) +
                                   " > optimum " + fmt(opt));
    c.expect(p >= opt - 1e-6, "instance " + std::to_string(i) + ": P below optimum");
    c.expect(pd >= opt - 1e-6, "instance " + std::to_string(i) + ": PD below optimum");
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  c.expect(secs < 10.0, "took " + fmt(secs) + " s");
  return c.finish("200 instances in " + fmt(secs) + " s");
}

Outcome triangle_micro() {
  Checker c;
  auto g = triangle();
  const double d = solve(g, mode_config(SolverMode::kDual, 1)).lower_bound;
  c.expect(std::abs(d + 1.0) <= 1e-9, "D lower_bound " + fmt(d));
  const double p = solve(g, mode_config(SolverMode::kPrimal, 5)).primal_cost;
  c.expect(p == -1.0, "P primal_cost " + fmt(p));
  auto pd = solve(g, mode_config(SolverMode::kPrimalDual, 1));
  c.expect(std::abs(pd.lower_bound + 1.0) <= 1e-9, "PD lower_bound " + fmt(pd.lower_bound));
  c.expect(pd.primal_cost == -1.0, "PD primal_cost " + fmt(pd.primal_cost));
  return c.finish("D lb=" + fmt(d) + ", P=" + fmt(p) + ", PD=" + fmt(pd.primal_cost) +
                  "/lb=" + fmt(pd.lower_bound));
}

Outcome lb_monotonicity() {
  Checker c;
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto state = separated(small_graph(rng, 5, 30, 0.4), 5);
    double prev = lower_bound(state);
    for (int it = 0; it < 20; ++it) {
      message_passing_iteration(state);
      const double lb = lower_bound(state);
      worst = std::max(worst, prev - lb);
      c.expect(lb >= prev - 1e-9, "instance " + std::to_string(i) + " iteration " +
                                      std::to_string(it) + " dropped by " + fmt(prev - lb));
      prev = lb;
    }
  }
  return c.finish("largest decrease " + fmt(worst));
}

Outcome reparametrization_conservation() {
  Checker c;
  std::mt19937_64 rng(4);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto g = small_graph(rng, 4, 20, 0.5);
    auto state = separated(g, 6);
    for (auto& l : state.lambda()) l = normal(rng);
    std::uniform_int_distribution<ClusterId> pick(0, 3);
    std::vector<ClusterId> labels(g.num_nodes());
    for (auto& l : labels) l = pick(rng);

    double total = 0.0;
    for (std::size_t e = 0; e < state.num_edges(); ++e) {
      const auto& edge = state.edges()[e];
      if (labels[edge.u] != labels[edge.v]) total += state.reparametrized_edge_cost(e);
    }
    for (std::size_t t = 0; t < state.num_triplets(); ++t) {
      const auto& n = state.triplets()[t].nodes;
      const bool y[3] = {labels[n[0]] != labels[n[1]], labels[n[0]] != labels[n[2]],
                         labels[n[1]] != labels[n[2]]};
      for (int s = 0; s < 3; ++s) total -= state.lambda(t, s) * y[s];
    }
    const double diff = std::abs(total - clustering_cost(g, labels));
    worst = std::max(worst, diff);
    c.expect(diff <= 1e-9, "instance " + std::to_string(i) + " off by " + fmt(diff));
  }
  return c.finish("largest deviation " + fmt(worst));
}

Outcome contraction_algebra() {
  Checker c;
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.3);
  for (int i = 0; i < 100; ++i) {
    auto g = small_graph(rng, 2, 40, 0.3);
    std::vector<NodePair> s;
    for (const auto& e : g.edges()) {
      if (coin(rng)) s.push_back({e.u, e.v});
    }
    auto f = connected_components(g.num_nodes(), s);
    auto got = contract(build_adjacency(g), f);
    auto ref = oracle::naive_contract(g, s);
    auto want = build_adjacency(ref.graph);
    const std::string tag = "instance " + std::to_string(i) + ": ";
    c.expect(got.contracted.num_nodes == want.num_nodes, tag + "node count");
    c.expect(got.contracted.rows == want.rows && got.contracted.cols == want.cols,
             tag + "entry pattern");
    if (got.contracted.nnz() == want.nnz()) {
      for (std::size_t k = 0; k < want.nnz(); ++k) {
        c.expect(std::abs(got.contracted.vals[k] - want.vals[k]) <= 1e-9, tag + "entry value");
      }
    }
    double diagonal = 0.0;
    for (const auto& e : g.edges()) {
      if (f.map[e.u] == f.map[e.v]) diagonal += e.cost;
    }
    c.expect(std::abs(got.joined_cost - diagonal) <= 1e-9, tag + "joined_cost");
    c.expect(std::abs(got.joined_cost - ref.joined_cost) <= 1e-9, tag + "oracle joined_cost");
  }
  return c.finish("100 (graph, S) pairs");
}

Outcome gaec_equivalence() {
  Checker c;
  std::mt19937_64 rng(6);
  for (int i = 0; i < 50; ++i) {
    auto g = small_graph(rng, 2, 60, 0.2);
    const double got = solve(g, mode_config(SolverMode::kGaec, 5)).primal_cost;
    const double want = oracle::naive_gaec(g).optimum_cost;
    c.expect(std::abs(got - want) <= 1e-9,
             "instance " + std::to_string(i) + ": " + fmt(got) + " vs " + fmt(want));
  }
  return c.finish("50 graphs");
}

Outcome separation() {
  Checker c;
  std::mt19937_64 rng(7);
  std::size_t cycles = 0;
  for (int i = 0; i < 50; ++i) {
    auto g = small_graph(rng, 4, 10, 0.5);
    const std::size_t max_len = 3 + i % 4;
    auto all = oracle::enumerate_conflicted_cycles_exhaustive(g, max_len);
    std::map<std::pair<NodeId, NodeId>, std::size_t> shortest;
    for (const auto& cyc : all) {
      auto key = std::pair(cyc.nodes.front(), cyc.nodes.back());
      auto it = shortest.find(key);
      if (it == shortest.end() || cyc.length() < it->second) shortest[key] = cyc.length();
    }
    const std::string tag = "instance " + std::to_string(i) + ": ";
    auto found = separate_conflicted_cycles(g, max_len);
    c.expect(found.size() == shortest.size(), tag + "cycle count");
    for (const auto& cyc : found) {
      ++cycles;
      c.expect(all.count(cyc) == 1, tag + "cycle not in oracle set");
      auto it = shortest.find({cyc.nodes.front(), cyc.nodes.back()});
      c.expect(it != shortest.end() && it->second == cyc.length(), tag + "not shortest");
      int negative = 0;
      for (std::size_t k = 0; k < cyc.length(); ++k) {
        auto e = g.find_edge(cyc.nodes[k], cyc.nodes[(k + 1) % cyc.length()]);
        c.expect(e != WeightedGraph::npos, tag + "missing edge");
        if (e != WeightedGraph::npos) negative += g.edge(e).cost < 0.0;
      }
      c.expect(negative == 1, tag + "negative edge count " + std::to_string(negative));
    }
  }
  return c.finish(std::to_string(cycles) + " cycles checked");
}

Outcome forest_invariant() {
  Checker c;
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    auto g = small_graph(rng, 2, 60, 0.15);
    auto s = select_spanning_forest_no_conflicts(g);
    auto f = connected_components(g.num_nodes(), s);
    const std::string tag = "instance " + std::to_string(i) + ": ";
    c.expect(s.size() == g.num_nodes() - f.num_targets, tag + "not a forest");
    for (const auto& e : g.edges()) {
      if (e.cost < 0.0) c.expect(f.map[e.u] != f.map[e.v], tag + "conflict left");
    }
    c.expect(contract_graph(g, f).joined_cost >= 0.0, tag + "negative joined_cost");
  }
  return c.finish("100 graphs");
}

Outcome convergence_proxy() {
  Checker c;
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    auto state = separated(small_graph(rng, 4, 8, 0.6), 5);
    for (int it = 0; it < 200; ++it) message_passing_iteration(state);
    c.expect(check_edge_triangle_agreement(state, 1e-6),
             "instance " + std::to_string(i) + " without agreement");
  }
  return c.finish("50 instances");
}

Outcome determinism_and_scaling() {
  Checker c;
  GridOptions opts;
  opts.height = 1000;
  opts.width = 1000;
  opts.stride = 10;
  auto g = generate_grid(opts, 2024);

  auto run = [&](int threads, double& seconds) {
    auto cfg = mode_config(SolverMode::kPrimalDual, 5, threads);
    cfg.seed = 17;
    const auto start = Clock::now();
    auto s = solve(g, cfg);
    seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return std::pair(s, cli::make_report("grid1000", cfg, threads, s, {}, false).dump(2));
  };
  double t8a = 0.0;
  double t8b = 0.0;
  double t1 = 0.0;
  auto [a, report_a] = run(8, t8a);
  auto [b, report_b] = run(8, t8b);
  auto [one, report_one] = run(1, t1);
  c.expect(t8a <= 120.0, "8-thread solve took " + fmt(t8a) + " s");
  c.expect(report_a == report_b, "reports differ between identical runs");
  c.expect(std::abs(a.primal_cost - one.primal_cost) <= 1e-6, "primal differs across threads");
  c.expect(std::abs(a.lower_bound - one.lower_bound) <= 1e-6, "bound differs across threads");
  return c.finish(std::to_string(g.num_edges()) + " edges, PD " + fmt(t8a) + " s (8 threads), " +
                  fmt(t1) + " s (1 thread), primal " + fmt(a.primal_cost) + ", bound " +
                  fmt(a.lower_bound));
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 oracle bracketing", oracle_bracketing},
      {"2 triangle micro-instance", triangle_micro},
      {"3 lower-bound monotonicity", lb_monotonicity},
      {"4 reparametrization conservation", reparametrization_conservation},
      {"5 contraction algebra", contraction_algebra},
      {"6 GAEC equivalence", gaec_equivalence},
      {"7 separation soundness and shortestness", separation},
      {"8 forest invariant", forest_invariant},
      {"9 convergence proxy", convergence_proxy},
      {"10 determinism and scaling", determinism_and_scaling},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
