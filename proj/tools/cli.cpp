#include "cli.hpp"

#include <glob.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "parmc/generate.hpp"
#include "parmc/graph.hpp"
#include "parmc/oracle.hpp"
#include "parmc/parallel.hpp"

namespace parmc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

/// Failure that maps to exit code 2 with the message on stderr.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

std::string format_real(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

struct SolverFlags {
  std::string input;
  std::string output;
  std::string mode = "PD";
  int mp_iterations = 5;
  int max_cycle_length = 0;
  int max_rounds = 100;
  int separation_rounds = 1;
  int threads = 0;
  std::uint64_t seed = 0;
  bool no_timings = false;

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.mode = parse_mode(mode);
    cfg.mp_iterations = mp_iterations;
    if (max_cycle_length > 0) cfg.max_cycle_length = max_cycle_length;
    cfg.max_rounds = max_rounds;
    cfg.dual_separation_rounds = separation_rounds;
    cfg.threads = threads;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
  }
};

void add_solver_flags(CLI::App* cmd, SolverFlags& f, bool with_mode) {
  cmd->add_option("-i,--input", f.input, "Instance file in MULTICUT format")->required();
  cmd->add_option("-o,--output", f.output, "Write the result here instead of stdout");
  if (with_mode) {
    cmd->add_option("--mode", f.mode, "Solver mode: P, PD, PD+, D or GAEC")
        ->check(CLI::IsMember({"P", "PD", "PD+", "D", "GAEC"}));
  }
  cmd->add_option("--mp-iterations", f.mp_iterations, "Message-passing iterations per round");
  cmd->add_option("--max-cycle-length", f.max_cycle_length,
                  "Longest separated cycle (default 5, 7 for PD+)");
  cmd->add_option("--max-rounds", f.max_rounds, "Round limit for PD and PD+");
  cmd->add_option("--separation-rounds", f.separation_rounds, "Separation rounds in mode D");
  cmd->add_option("--threads", f.threads, "Worker threads (default: all cores)")
      ->envname("MULTICUT_THREADS");
  cmd->add_option("--seed", f.seed, "Random seed");
  cmd->add_flag("--no-timings", f.no_timings, "Write null for all wall-clock fields");
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write " + path);
  file << text;
}

WeightedGraph load(const std::string& path) {
  try {
    return read_instance(path);
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

std::string instance_name(const std::string& path) {
  return std::filesystem::path(path).filename().string();
}

void cmd_solve(const SolverFlags& flags, std::ostream& out) {
  const auto start = Clock::now();
  SolverConfig cfg;
  try {
    cfg = flags.config();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  WeightedGraph g = load(flags.input);
  ReportTimes times;
  times.read_ms = ms_since(start);
  const auto solve_start = Clock::now();
  Solution solution = solve(g, cfg);
  times.solve_ms = ms_since(solve_start);
  times.total_ms = ms_since(start);
  auto report = make_report(instance_name(flags.input), cfg, resolve_threads(cfg.threads),
                            solution, times, !flags.no_timings);
  write_output(flags.output, report.dump(2) + "\n", out);
}

struct GenerateFlags {
  std::string type = "random";
  std::string output;
  std::size_t nodes = 10;
  double probability = 0.5;
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t stride = 0;
  std::uint64_t seed = 0;
};

void cmd_generate(const GenerateFlags& f, std::ostream& out) {
  WeightedGraph g;
  try {
    if (f.type == "random") {
      g = generate_random(f.nodes, f.probability, f.seed);
    } else {
      GridOptions opts;
      opts.height = f.height;
      opts.width = f.width;
      opts.stride = f.stride;
      g = generate_grid(opts, f.seed);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  write_output(f.output, serialize_instance(g), out);
}

struct BenchFlags {
  SolverFlags solver;
  std::string modes = "P,PD";
};

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t matches{};
  std::vector<std::string> paths;
  if (::glob(pattern.c_str(), 0, nullptr, &matches) == 0) {
    for (std::size_t i = 0; i < matches.gl_pathc; ++i) paths.emplace_back(matches.gl_pathv[i]);
  }
  globfree(&matches);
  return paths;
}

std::vector<std::string> split_modes(const std::string& list) {
  std::vector<std::string> modes;
  std::stringstream in(list);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) modes.push_back(item);
  }
  return modes;
}

void cmd_bench(const BenchFlags& flags, std::ostream& out) {
  const auto paths = expand_glob(flags.solver.input);
  if (paths.empty()) throw UsageError("no instance matches '" + flags.solver.input + "'");
  const auto modes = split_modes(flags.modes);
  if (modes.empty()) throw UsageError("no modes given");
  std::vector<SolverConfig> configs;
  for (const auto& m : modes) {
    SolverFlags f = flags.solver;
    f.mode = m;
    try {
      configs.push_back(f.config());
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  // Every instance is read before any row is produced.
  std::vector<WeightedGraph> graphs;
  for (const auto& p : paths) graphs.push_back(load(p));

  struct Totals {
    double primal = 0.0;
    double bound = 0.0;
    std::size_t bounds = 0;
    double time = 0.0;
    std::size_t count = 0;
  };
  std::vector<Totals> totals(configs.size());
  std::ostringstream csv;
  csv << kBenchHeader << "\n";
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    for (std::size_t m = 0; m < configs.size(); ++m) {
      const auto start = Clock::now();
      Solution s = solve(graphs[i], configs[m]);
      const double ms = ms_since(start);
      csv << instance_name(paths[i]) << ',' << to_string(configs[m].mode) << ','
          << format_real(s.primal_cost) << ','
          << (std::isfinite(s.lower_bound) ? format_real(s.lower_bound) : "") << ','
          << format_real(ms) << "\n";
      auto& t = totals[m];
      t.primal += s.primal_cost;
      if (std::isfinite(s.lower_bound)) {
        t.bound += s.lower_bound;
        ++t.bounds;
      }
      t.time += ms;
      ++t.count;
    }
  }
  for (std::size_t m = 0; m < configs.size(); ++m) {
    const auto& t = totals[m];
    const double n = static_cast<double>(t.count);
    csv << "mean," << to_string(configs[m].mode) << ',' << format_real(t.primal / n) << ','
        << (t.bounds > 0 ? format_real(t.bound / static_cast<double>(t.bounds)) : "") << ','
        << format_real(t.time / n) << "\n";
  }
  write_output(flags.solver.output, csv.str(), out);
}

void cmd_oracle(const std::string& input, const std::string& output, std::ostream& out) {
  WeightedGraph g = load(input);
  oracle::OracleResult result;
  try {
    result = oracle::brute_force_optimum(g);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  nlohmann::ordered_json j;
  j["instance_name"] = instance_name(input);
  j["optimum"] = result.optimum_cost;
  j["labeling"] = result.optimum_labeling.cluster_of;
  write_output(output, j.dump(2) + "\n", out);
}

}  // namespace

nlohmann::ordered_json make_report(const std::string& name, const SolverConfig& cfg,
                                   unsigned threads, const Solution& solution,
                                   const ReportTimes& times, bool include_timings) {
  auto timing = [&](double ms) -> nlohmann::ordered_json {
    if (!include_timings) return nullptr;
    return ms;
  };
  nlohmann::ordered_json j;
  j["instance_name"] = name;
  j["mode"] = std::string(to_string(cfg.mode));
  j["config"] = {
      {"mp_iterations", cfg.mp_iterations},
      {"max_cycle_length", cfg.effective_cycle_length()},
      {"matching_switch_fraction", cfg.matching_switch_fraction},
      {"max_rounds", cfg.max_rounds},
      {"dual_separation_rounds", cfg.dual_separation_rounds},
  };
  j["primal_cost"] = solution.primal_cost;
  j["lower_bound"] = number_or_null(solution.lower_bound);
  j["gap"] = std::isfinite(solution.lower_bound)
                 ? nlohmann::ordered_json(solution.primal_cost - solution.lower_bound)
                 : nlohmann::ordered_json(nullptr);
  j["node_labels"] = solution.labeling.cluster_of;
  auto trace = nlohmann::ordered_json::array();
  for (const auto& r : solution.trace) {
    trace.push_back({
        {"round", r.round},
        {"nodes", r.nodes},
        {"edges", r.edges},
        {"triplets", r.triplets},
        {"lower_bound", number_or_null(r.lower_bound)},
        {"lower_bound_valid", r.lower_bound_valid},
        {"contracted", r.contracted},
        {"strategy", r.strategy},
        {"elapsed_ms", timing(r.elapsed_ms)},
    });
  }
  j["trace"] = std::move(trace);
  j["wall_times_ms"] = {
      {"read", timing(times.read_ms)},
      {"solve", timing(times.solve_ms)},
      {"total", timing(times.total_ms)},
  };
  j["seed"] = cfg.seed;
  j["threads"] = threads;
  return j;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel primal-dual multicut solver"};
  app.name("parmc");
  app.require_subcommand(1);

  SolverFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "Solve an instance and write a JSON report");
  add_solver_flags(solve_cmd, solve_flags, true);

  SolverFlags bound_flags;
  auto* bound_cmd = app.add_subcommand("bound", "Compute a lower bound (mode D)");
  add_solver_flags(bound_cmd, bound_flags, false);

  GenerateFlags gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic instance");
  gen_cmd->add_option("--type", gen.type, "random or grid")
      ->check(CLI::IsMember({"random", "grid"}));
  gen_cmd->add_option("-n,--nodes", gen.nodes, "Node count (random)");
  gen_cmd->add_option("-p,--probability", gen.probability, "Edge probability (random)");
  gen_cmd->add_option("--height", gen.height, "Grid rows");
  gen_cmd->add_option("--width", gen.width, "Grid columns");
  gen_cmd->add_option("--stride", gen.stride, "Long-range edge stride (0: none)");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("-o,--output", gen.output, "Output file (default stdout)");

  BenchFlags bench;
  auto* bench_cmd = app.add_subcommand("bench", "Run a mode matrix over instances, write CSV");
  add_solver_flags(bench_cmd, bench.solver, false);
  bench_cmd->add_option("--modes", bench.modes, "Comma-separated modes (default P,PD)");

  std::string oracle_input;
  std::string oracle_output;
  auto* oracle_cmd = app.add_subcommand("oracle", "Exact optimum by enumeration (<= 12 nodes)");
  oracle_cmd->add_option("-i,--input", oracle_input, "Instance file")->required();
  oracle_cmd->add_option("-o,--output", oracle_output, "Output file (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (solve_cmd->parsed()) {
      cmd_solve(solve_flags, out);
    } else if (bound_cmd->parsed()) {
      bound_flags.mode = "D";
      cmd_solve(bound_flags, out);
    } else if (gen_cmd->parsed()) {
      cmd_generate(gen, out);
    } else if (bench_cmd->parsed()) {
      cmd_bench(bench, out);
    } else if (oracle_cmd->parsed()) {
      cmd_oracle(oracle_input, oracle_output, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace parmc::cli
