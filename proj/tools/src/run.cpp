#include <chrono>
#include <fstream>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "ctscuc/analysis.hpp"
#include "ctscuc/cli.hpp"
#include "ctscuc/result_file.hpp"
#include "ctscuc/verifier.hpp"

namespace ctscuc::cli {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string command_name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::Report: return "report";
    case Command::SweepZmax: return "sweep-zmax";
  }
  return "?";
}

json config_to_json(const RunConfig& cfg) {
  json j = {{"command", command_name(cfg.command)},
            {"case_path", cfg.case_path},
            {"periods", cfg.periods ? json(*cfg.periods) : json(nullptr)},
            {"time_limit", cfg.time_limit},
            {"options", options_to_json(cfg.options)}};
  if (cfg.command == Command::SweepZmax) j["zmax_values"] = cfg.zmax_values;
  return j;
}

int exit_for_status(SolveStatus status) {
  switch (status) {
    case SolveStatus::OptimalWithinGap: return exit_code::kOk;
    case SolveStatus::Infeasible: return exit_code::kInfeasible;
    case SolveStatus::Unbounded:
    case SolveStatus::TimeLimit: return exit_code::kSolverFailure;
  }
  return exit_code::kUnexpected;
}

void print_verification(std::ostream& out, const VerificationReport& report) {
  if (report.passed()) {
    fmt::print(out, "verification: PASS\n");
    return;
  }
  fmt::print(out, "verification: FAIL ({} violations)\n", report.violations.size());
  std::size_t shown = 0;
  for (const auto& v : report.violations) {
    if (++shown > 10) break;
    fmt::print(out, "  {} [{}] residual {:.6g}\n", v.family, v.indices, v.residual);
  }
}

Case load_run_case(const std::string& path, std::optional<int> periods) {
  Case c = load_case(path);
  return periods ? truncate_horizon(c, *periods) : c;
}

int solve_command(const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const Case c = load_run_case(cfg.case_path, cfg.periods);
  const auto contingencies = build_contingency_set(c);
  const auto model = assemble_model(c, contingencies, cfg.options);
  if (cfg.lp_path) {
    std::ofstream lp(*cfg.lp_path);
    if (!lp) throw ResultFileError(fmt::format("cannot write '{}'", *cfg.lp_path));
    model.write_lp(lp);
  }
  const auto solver = make_solver();
  const auto result = solver->solve(model, cfg.options.mip_gap, cfg.time_limit);

  json doc = {{"format", kResultFormat}, {"version", kResultVersion}};
  doc["config"] = config_to_json(cfg);
  doc["config"]["case_name"] = c.name;
  doc["solve"] = {{"status", std::string(to_string(result.status))},
                  {"has_solution", result.has_solution},
                  {"objective", result.has_solution ? json(result.objective_value) : json(nullptr)},
                  {"best_bound", result.has_solution ? json(result.best_bound) : json(nullptr)},
                  {"gap", result.has_solution ? json(result.gap) : json(nullptr)},
                  {"backend", solver->name()},
                  {"model", {{"variables", model.num_variables()},
                             {"binaries", model.num_binaries()},
                             {"constraints", model.num_constraints()}}}};

  fmt::print(out, "case {}: {} buses, {} generators, {} branches, {} periods, {} contingencies\n",
             c.name, c.buses.size(), c.generators.size(), c.branches.size(), c.horizon,
             contingencies.size());
  fmt::print(out, "status: {}\n", to_string(result.status));

  int code = exit_for_status(result.status);
  if (result.has_solution) {
    const auto solution = extract_solution(c, contingencies, result);
    const auto report = verify_solution(c, contingencies, cfg.options, solution);
    const auto startups = startup_report(solution, c);
    const auto switching = switching_report(solution, c, contingencies);
    doc["variables"] = variables_to_json(result);
    doc["verification"] = verification_to_json(report);
    doc["analyses"] = {{"startups", to_json(startups)}, {"switching", to_json(switching)}};

    fmt::print(out, "objective: {:.2f}  (bound {:.2f}, gap {:.4f})\n", result.objective_value,
               result.best_bound, result.gap);
    print_verification(out, report);
    fmt::print(out, "\nGenerator start-ups\n{}", render_startup_table(startups));
    if (cfg.options.cts_enabled)
      fmt::print(out, "\nSwitching solution\n{}", render_switching_table(switching));
    if (!report.passed() && code == exit_code::kOk) code = exit_code::kVerificationFailed;
  }
  doc["timing"] = {{"solver_wall_time_s", result.wall_time}, {"total_wall_time_s", seconds_since(start)}};
  if (!cfg.output_path.empty()) write_json_file(cfg.output_path, doc);
  return code;
}

struct LoadedResult {
  json doc;
  SolveOptions options;
  std::string case_path;
  std::optional<int> periods;
};

LoadedResult load_result(const std::string& path) {
  LoadedResult r;
  r.doc = read_json_file(path);
  if (r.doc.value("format", "") != kResultFormat)
    throw ResultFileError(fmt::format("'{}' is not a solve result", path));
  try {
    r.options = options_from_json(r.doc.at("config").at("options"));
    r.case_path = r.doc.at("config").at("case_path").get<std::string>();
    if (const auto& p = r.doc.at("config").value("periods", json(nullptr)); !p.is_null())
      r.periods = p.get<int>();
  } catch (const json::exception& e) {
    throw ResultFileError(fmt::format("'{}': {}", path, e.what()));
  }
  return r;
}

bool has_solution(const json& doc) {
  return doc.contains("solve") && doc["solve"].value("has_solution", false);
}

int verify_command(const RunConfig& cfg, std::ostream& out) {
  const auto stored = load_result(*cfg.result_path);
  const Case c = load_run_case(cfg.case_path.empty() ? stored.case_path : cfg.case_path, stored.periods);
  if (!has_solution(stored.doc)) {
    fmt::print(out, "result holds no solution (status {})\n",
               stored.doc.at("solve").value("status", "?"));
    return exit_code::kInfeasible;
  }
  const auto contingencies = build_contingency_set(c);
  const auto solution = solution_from_result(c, contingencies, stored.doc);
  const auto report = verify_solution(c, contingencies, stored.options, solution);
  print_verification(out, report);
  if (stored.doc.contains("verification")) {
    const bool was = stored.doc["verification"].value("passed", false);
    if (was != report.passed())
      fmt::print(out, "note: stored outcome was {}\n", was ? "PASS" : "FAIL");
  }
  if (!cfg.output_path.empty()) {
    json doc = {{"format", "ctscuc-verification"}, {"version", kResultVersion},
                {"result_path", *cfg.result_path}, {"verification", verification_to_json(report)}};
    write_json_file(cfg.output_path, doc);
  }
  return report.passed() ? exit_code::kOk : exit_code::kVerificationFailed;
}

std::string scenario_label(const SolveOptions& o) {
  std::string label = o.emergency_rating_mode == EmergencyRatingMode::Infinite ? "II" : "I";
  label += o.cts_enabled ? fmt::format(" (CTS, z_max={})", o.z_max) : " (no CTS)";
  return label;
}

int report_command(const RunConfig& cfg, std::ostream& out) {
  const auto primary = load_result(*cfg.result_path);
  const Case c = load_run_case(cfg.case_path.empty() ? primary.case_path : cfg.case_path, primary.periods);
  const auto contingencies = build_contingency_set(c);
  if (!has_solution(primary.doc)) throw ResultFileError("primary result holds no solution");
  const auto a = solution_from_result(c, contingencies, primary.doc);

  json analyses;
  std::vector<std::pair<std::string, double>> costs{{scenario_label(primary.options), a.objective}};
  const auto startups = startup_report(a, c);
  const auto switching = switching_report(a, c, contingencies);
  analyses["startups"] = to_json(startups);
  analyses["switching"] = to_json(switching);

  std::string tables;
  if (cfg.compare_path) {
    const auto other = load_result(*cfg.compare_path);
    if (!has_solution(other.doc)) throw ResultFileError("compared result holds no solution");
    const auto b = solution_from_result(c, contingencies, other.doc);
    costs.emplace_back(scenario_label(other.options), b.objective);
    const auto& oa = primary.options;
    const auto& ob = other.options;
    if (oa.emergency_rating_mode == EmergencyRatingMode::Regular &&
        ob.emergency_rating_mode == EmergencyRatingMode::Infinite) {
      const auto cc = congestion_report(a.objective, b.objective, gap_slack(a, b));
      analyses["congestion"] = to_json(cc);
      tables += fmt::format("\nCongestion cost: {:.2f}\n", cc.congestion_cost);
      if (cc.warning) tables += fmt::format("warning: {}\n", *cc.warning);
    } else if (oa.emergency_rating_mode == ob.emergency_rating_mode && oa.cts_enabled != ob.cts_enabled) {
      const auto& without = oa.cts_enabled ? b : a;
      const auto& with = oa.cts_enabled ? a : b;
      const auto overload = overload_report(without, with, c, contingencies);
      const auto su_without = startup_report(without, c), su_with = startup_report(with, c);
      analyses["overload"] = to_json(overload);
      analyses["startup_difference"] = su_without.total - su_with.total;
      tables += fmt::format("\nPost-contingency congestion (long-term rating)\n{}",
                            render_overload_table(overload));
      tables += fmt::format("max overload reduction: {:.1f} pp\n", overload.max_reduction_pp);
      tables += fmt::format("start-ups without CTS {}, with CTS {}\n", su_without.total, su_with.total);
    } else {
      throw ResultFileError(
          "compared runs must differ in emergency rating mode (regular vs infinite) or in CTS");
    }
  }

  fmt::print(out, "Operational cost\n{}", render_cost_table(costs));
  fmt::print(out, "\nGenerator start-ups\n{}", render_startup_table(startups));
  if (primary.options.cts_enabled)
    fmt::print(out, "\nSwitching solution\n{}", render_switching_table(switching));
  fmt::print(out, "{}", tables);

  if (!cfg.output_path.empty()) {
    json doc = {{"format", "ctscuc-report"}, {"version", kResultVersion},
                {"result_path", *cfg.result_path},
                {"compare_path", cfg.compare_path ? json(*cfg.compare_path) : json(nullptr)},
                {"analyses", analyses}};
    write_json_file(cfg.output_path, doc);
  }
  return exit_code::kOk;
}

std::vector<int> resolve_zmax_values(const RunConfig& cfg, const Case& c) {
  int switchable = 0;
  for (const auto& k : c.branches) switchable += k.switchable && !k.radial;
  std::vector<int> values;
  for (const auto& v : cfg.zmax_values) {
    if (v == "all") {
      values.push_back(std::max(1, switchable - 1));
      continue;
    }
    std::size_t used = 0;
    int z = 0;
    try {
      z = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ResultFileError(fmt::format("bad z_max value '{}'", v));
    if (z < 1) throw ResultFileError(fmt::format("z_max values must be at least 1, got {}", z));
    values.push_back(z);
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

int sweep_command(const RunConfig& cfg, std::ostream& out) {
  const auto start = Clock::now();
  const Case c = load_run_case(cfg.case_path, cfg.periods);
  const auto values = resolve_zmax_values(cfg, c);
  const auto solver = make_solver();
  const auto sweep = zmax_sweep(c, cfg.options, values, *solver, cfg.time_limit);
  fmt::print(out, "Congestion cost by z_max\n{}", render_sweep_table(sweep));
  for (const auto& w : sweep.warnings) fmt::print(out, "warning: {}\n", w);
  if (cfg.csv_path) {
    std::ofstream csv(*cfg.csv_path);
    if (!csv) throw ResultFileError(fmt::format("cannot write '{}'", *cfg.csv_path));
    csv << sweep_csv(sweep);
  }
  if (!cfg.output_path.empty()) {
    json doc = {{"format", "ctscuc-sweep"}, {"version", kResultVersion}};
    doc["config"] = config_to_json(cfg);
    doc["sweep"] = to_json(sweep);
    doc["timing"] = {{"total_wall_time_s", seconds_since(start)}};
    write_json_file(cfg.output_path, doc);
  }
  return exit_code::kOk;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    if (auto problems = validate_options(config.options); !problems.empty()) {
      fmt::print(err, "error: {}\n", problems.front());
      return exit_code::kInputError;
    }
    switch (config.command) {
      case Command::Solve: return solve_command(config, out);
      case Command::Verify: return verify_command(config, out);
      case Command::Report: return report_command(config, out);
      case Command::SweepZmax: return sweep_command(config, out);
    }
  } catch (const CaseError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kInputError;
  } catch (const ResultFileError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kInputError;
  } catch (const FormulationError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kInputError;
  } catch (const AnalysisError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return exit_code::kInfeasible;
  } catch (const SolverError& e) {
    fmt::print(err, "solver error: {}\n", e.what());
    return exit_code::kSolverFailure;
  } catch (const std::exception& e) {
    fmt::print(err, "unexpected error: {}\n", e.what());
    return exit_code::kUnexpected;
  }
  return exit_code::kUnexpected;
}

}  // namespace ctscuc::cli
