#include "ctscuc/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

namespace ctscuc {

ScucRun solve_scuc(const Case& c, const ContingencySet& contingencies, const SolveOptions& options,
                   const MipSolver& solver, double time_limit) {
  const auto start = std::chrono::steady_clock::now();
  const auto model = assemble_model(c, contingencies, options);
  const auto result = solver.solve(model, options.mip_gap, time_limit);
  ScucRun run;
  run.has_solution = result.has_solution;
  if (result.has_solution) {
    run.solution = extract_solution(c, contingencies, result);
  } else {
    run.solution.status = result.status;
  }
  run.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

double gap_slack(double gap_a, double objective_a, double gap_b, double objective_b) {
  return gap_a * std::abs(objective_a) + gap_b * std::abs(objective_b);
}

double gap_slack(const Solution& a, const Solution& b) {
  return gap_slack(a.gap, a.objective, b.gap, b.objective);
}

double congestion_cost(double cost_I, double cost_II, double slack) {
  const double cc = cost_I - cost_II;
  if (cc < -slack)
    throw AnalysisError(fmt::format(
        "scenario II cost {:.2f} exceeds scenario I cost {:.2f} beyond slack {:.2f}", cost_II,
        cost_I, slack));
  return cc;
}

CongestionReport congestion_report(double cost_I, double cost_II, double slack,
                                   std::optional<double> baseline_congestion_cost) {
  CongestionReport r;
  r.total_cost_scenario_I = cost_I;
  r.total_cost_scenario_II = cost_II;
  r.congestion_cost = congestion_cost(cost_I, cost_II, slack);
  if (r.congestion_cost < 0.0) {
    r.warning = fmt::format("congestion cost {:.2f} within gap slack {:.2f}; clamped to 0",
                            r.congestion_cost, slack);
    r.congestion_cost = 0.0;
  }
  if (baseline_congestion_cost && *baseline_congestion_cost > 0.0)
    r.reduction_vs_baseline = 1.0 - r.congestion_cost / *baseline_congestion_cost;
  return r;
}

StartupReport startup_report(const Solution& s, const Case& c) {
  StartupReport r;
  const auto T = static_cast<std::size_t>(c.horizon);
  if (s.v.dim(0) != c.generators.size() || s.v.dim(1) != T)
    throw AnalysisError("solution does not match the case");
  r.per_period.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t g = 0; g < c.generators.size(); ++g)
      if (std::round(s.v(g, t)) == 1.0) r.per_period[t].push_back(c.generators[g].id);
    std::sort(r.per_period[t].begin(), r.per_period[t].end());
    r.total += static_cast<int>(r.per_period[t].size());
  }
  return r;
}

std::vector<SwitchingRow> switching_report(const Solution& s, const Case& c,
                                           const ContingencySet& contingencies) {
  std::vector<SwitchingRow> rows;
  if (s.z.dim(0) != contingencies.size()) return rows;
  for (int t = 0; t < c.horizon; ++t) {
    for (std::size_t ci = 0; ci < contingencies.size(); ++ci) {
      SwitchingRow row{t + 1, contingencies.members[ci], {}};
      for (std::size_t k = 0; k < c.branches.size(); ++k)
        if (c.branches[k].id != row.outage && std::round(s.z(ci, k, t)) == 0.0)
          row.opened.push_back(c.branches[k].id);
      if (row.opened.empty()) continue;
      std::sort(row.opened.begin(), row.opened.end());
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SwitchingRow& a, const SwitchingRow& b) {
    return std::tie(a.period, a.outage) < std::tie(b.period, b.outage);
  });
  return rows;
}

OverloadReport overload_report(const Solution& without_cts, const Solution& with_cts,
                               const Case& c, const ContingencySet& contingencies) {
  const std::size_t C = contingencies.size(), K = c.branches.size();
  const auto T = static_cast<std::size_t>(c.horizon);
  for (const Solution* s : {&without_cts, &with_cts})
    if (s->pkc.dim(0) != C || s->pkc.dim(1) != K || s->pkc.dim(2) != T)
      throw AnalysisError("solutions do not match the case");

  OverloadReport r;
  for (std::size_t k = 0; k < K; ++k) {
    const auto& line = c.branches[k];
    for (std::size_t t = 0; t < T; ++t) {
      LineOverload e;
      e.branch = line.id;
      e.period = static_cast<int>(t) + 1;
      for (std::size_t ci = 0; ci < C; ++ci) {
        const double a = std::abs(without_cts.pkc(ci, k, t)) / line.rating_long_term;
        const double b = std::abs(with_cts.pkc(ci, k, t)) / line.rating_long_term;
        e.max_loading_without = std::max(e.max_loading_without, a);
        e.max_loading_with = std::max(e.max_loading_with, b);
        if (a > 1.0 + 1e-9) e.congested_without.push_back(contingencies.members[ci]);
        if (b > 1.0 + 1e-9) e.congested_with.push_back(contingencies.members[ci]);
      }
      const double over_a = std::max(0.0, e.max_loading_without - 1.0);
      const double over_b = std::max(0.0, e.max_loading_with - 1.0);
      e.reduction_pp = 100.0 * (over_a - over_b);
      r.max_reduction_pp = std::max(r.max_reduction_pp, e.reduction_pp);
      r.entries.push_back(std::move(e));
    }
  }
  return r;
}

Sweep zmax_sweep(const Case& c, const SolveOptions& options, const std::vector<int>& z_values,
                 const MipSolver& solver, double time_limit) {
  if (z_values.empty()) throw AnalysisError("no z_max values");
  for (std::size_t i = 0; i < z_values.size(); ++i) {
    if (z_values[i] < 1) throw AnalysisError("z_max values must be at least 1");
    if (i > 0 && z_values[i] <= z_values[i - 1])
      throw AnalysisError("z_max values must be strictly ascending");
  }
  const auto contingencies = build_contingency_set(c);

  auto scenario_II = options;
  scenario_II.cts_enabled = false;
  scenario_II.emergency_rating_mode = EmergencyRatingMode::Infinite;
  const auto base = solve_scuc(c, contingencies, scenario_II, solver, time_limit);
  if (!base.has_solution)
    throw AnalysisError(fmt::format("scenario II solve ended {}", to_string(base.solution.status)));

  Sweep sweep;
  sweep.scenario_II_objective = base.solution.objective;
  sweep.scenario_II_gap = base.solution.gap;
  for (int z : z_values) {
    auto opts = options;
    opts.cts_enabled = true;
    opts.z_max = z;
    opts.emergency_rating_mode = EmergencyRatingMode::Regular;
    const auto run = solve_scuc(c, contingencies, opts, solver, time_limit);
    if (!run.has_solution)
      throw AnalysisError(
          fmt::format("z_max={} solve ended {}", z, to_string(run.solution.status)));
    const auto report = congestion_report(run.solution.objective, base.solution.objective,
                                          gap_slack(run.solution, base.solution));
    if (report.warning) sweep.warnings.push_back(fmt::format("z_max={}: {}", z, *report.warning));
    sweep.points.push_back({z, report.congestion_cost, run.solution.objective, run.solution.gap});
  }
  return sweep;
}

std::string compress_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::string out;
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j + 1 < ids.size() && ids[j + 1] == ids[j] + 1) ++j;
    if (!out.empty()) out += ',';
    out += j > i + 1 ? fmt::format("{}-{}", ids[i], ids[j])
                     : j == i + 1 ? fmt::format("{},{}", ids[i], ids[j]) : fmt::format("{}", ids[i]);
    i = j + 1;
  }
  return out;
}

std::string render_cost_table(const std::vector<std::pair<std::string, double>>& rows) {
  std::size_t width = 8;
  for (const auto& [label, _] : rows) width = std::max(width, label.size());
  std::string out = fmt::format("{:<{}}  {:>14}\n", "Scenario", width, "Cost ($)");
  for (const auto& [label, cost] : rows) out += fmt::format("{:<{}}  {:>14.2f}\n", label, width, cost);
  return out;
}

std::string render_startup_table(const StartupReport& report) {
  std::string out = fmt::format("{:>6}  {}\n", "Period", "Generators started");
  for (std::size_t t = 0; t < report.per_period.size(); ++t) {
    if (report.per_period[t].empty()) continue;
    out += fmt::format("{:>6}  {}\n", t + 1, compress_ids(report.per_period[t]));
  }
  out += fmt::format("{:>6}  {}\n", "Total", report.total);
  return out;
}

std::string render_switching_table(const std::vector<SwitchingRow>& rows) {
  std::string out = fmt::format("{:>6}  {:>6}  {}\n", "Period", "Outage", "Switched off");
  for (const auto& row : rows) {
    std::string opened;
    for (int k : row.opened) opened += (opened.empty() ? "" : ",") + std::to_string(k);
    out += fmt::format("{:>6}  {:>6}  {}\n", row.period, row.outage, opened);
  }
  return out;
}

std::string render_overload_table(const OverloadReport& report, std::optional<int> period) {
  std::string out = fmt::format("{:>6}  {:>4}  {:<24}  {:<24}  {:>9}  {:>9}  {:>9}\n", "Period",
                                "Line", "Outages (no CTS)", "Outages (CTS)", "Max no", "Max CTS",
                                "Red. pp");
  for (const auto& e : report.entries) {
    if (period && e.period != *period) continue;
    if (e.congested_without.empty() && e.congested_with.empty()) continue;
    out += fmt::format("{:>6}  {:>4}  {:<24}  {:<24}  {:>8.1f}%  {:>8.1f}%  {:>9.1f}\n", e.period,
                       e.branch, compress_ids(e.congested_without), compress_ids(e.congested_with),
                       100.0 * e.max_loading_without, 100.0 * e.max_loading_with, e.reduction_pp);
  }
  return out;
}

std::string render_sweep_table(const Sweep& sweep) {
  std::string out = fmt::format("{:>6}  {:>14}  {:>14}\n", "z_max", "Objective ($)", "CC ($)");
  out += fmt::format("{:>6}  {:>14.2f}  {:>14}\n", "II", sweep.scenario_II_objective, "");
  for (const auto& p : sweep.points)
    out += fmt::format("{:>6}  {:>14.2f}  {:>14.2f}\n", p.z_max, p.objective, p.congestion_cost);
  return out;
}

std::string sweep_csv(const Sweep& sweep) {
  std::string out = "z_max,congestion_cost\n";
  for (const auto& p : sweep.points) out += fmt::format("{},{:.6f}\n", p.z_max, p.congestion_cost);
  return out;
}

}  // namespace ctscuc
