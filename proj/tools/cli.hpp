#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "parmc/solver.hpp"

namespace parmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct ReportTimes {
  double read_ms = 0.0;
  double solve_ms = 0.0;
  double total_ms = 0.0;
};

/// RunReport as JSON. Timing fields are null when include_timings is false,
/// which makes reports of identical runs byte-identical.
nlohmann::ordered_json make_report(const std::string& instance_name, const SolverConfig& cfg,
                                   unsigned threads, const Solution& solution,
                                   const ReportTimes& times, bool include_timings);

/// Column header of the bench CSV.
inline constexpr const char* kBenchHeader = "instance,mode,primal_cost,lower_bound,time_ms";

}  // namespace parmc::cli
