#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctscuc/formulation.hpp"
#include "ctscuc/network.hpp"
#include "ctscuc/solution.hpp"
#include "ctscuc/solver.hpp"

namespace ctscuc {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Assemble, solve and extract. A solution without values (infeasible,
/// unbounded, or a time limit with no incumbent) keeps empty grids.
struct ScucRun {
  Solution solution;
  bool has_solution = false;
  double wall_time = 0.0;  // s
};

ScucRun solve_scuc(const Case& c, const ContingencySet& contingencies, const SolveOptions& options,
                   const MipSolver& solver, double time_limit);

/// Allowance for comparing two gap-optimal objectives.
double gap_slack(double gap_a, double objective_a, double gap_b, double objective_b);
double gap_slack(const Solution& a, const Solution& b);

/// cost_I - cost_II. Throws AnalysisError when the result is below -slack.
double congestion_cost(double cost_I, double cost_II, double slack = 0.0);

struct CongestionReport {
  double total_cost_scenario_I = 0.0;
  double total_cost_scenario_II = 0.0;
  double congestion_cost = 0.0;
  std::optional<double> reduction_vs_baseline;  // fraction
  std::optional<std::string> warning;
};

/// Negative differences within `slack` are clamped to 0 with a warning.
/// `baseline_congestion_cost` is the no-CTS figure the reduction refers to.
CongestionReport congestion_report(double cost_I, double cost_II, double slack = 0.0,
                                   std::optional<double> baseline_congestion_cost = {});

struct StartupReport {
  std::vector<std::vector<int>> per_period;  // generator ids, ascending
  int total = 0;
};

StartupReport startup_report(const Solution& s, const Case& c);

struct SwitchingRow {
  int period = 0;  // 1-based
  int outage = 0;
  std::vector<int> opened;  // ascending
};

/// Voluntary openings only, ordered by (period, outage).
std::vector<SwitchingRow> switching_report(const Solution& s, const Case& c,
                                           const ContingencySet& contingencies);

struct LineOverload {
  int branch = 0;
  int period = 0;  // 1-based
  std::vector<int> congested_without;  // outages pushing flow past the long-term rating
  std::vector<int> congested_with;
  double max_loading_without = 0.0;  // max |flow| / long-term rating
  double max_loading_with = 0.0;
  double reduction_pp = 0.0;  // overload percentage points removed by switching
};

struct OverloadReport {
  std::vector<LineOverload> entries;  // every (line, period), line-major
  double max_reduction_pp = 0.0;
};

OverloadReport overload_report(const Solution& without_cts, const Solution& with_cts,
                               const Case& c, const ContingencySet& contingencies);

struct SweepPoint {
  int z_max = 0;
  double congestion_cost = 0.0;
  double objective = 0.0;
  double gap = 0.0;
};

struct Sweep {
  double scenario_II_objective = 0.0;
  double scenario_II_gap = 0.0;
  std::vector<SweepPoint> points;  // ascending z_max
  std::vector<std::string> warnings;
};

/// One CTS solve per z value plus one Scenario II solve (infinite ratings,
/// no switching). Throws AnalysisError if any solve ends without a solution.
Sweep zmax_sweep(const Case& c, const SolveOptions& options, const std::vector<int>& z_values,
                 const MipSolver& solver, double time_limit);

/// "1,2,5-9": ascending ids with consecutive runs compressed.
std::string compress_ids(std::vector<int> ids);

std::string render_cost_table(const std::vector<std::pair<std::string, double>>& rows);
std::string render_startup_table(const StartupReport& report);
std::string render_switching_table(const std::vector<SwitchingRow>& rows);
std::string render_overload_table(const OverloadReport& report, std::optional<int> period = {});
std::string render_sweep_table(const Sweep& sweep);
std::string sweep_csv(const Sweep& sweep);

}  // namespace ctscuc
