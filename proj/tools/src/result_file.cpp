#include "ctscuc/result_file.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include <fmt/format.h>

namespace ctscuc {

std::string to_string(EmergencyRatingMode mode) {
  return mode == EmergencyRatingMode::Infinite ? "infinite" : "regular";
}

EmergencyRatingMode parse_emergency_rating_mode(const std::string& text) {
  if (text == "regular") return EmergencyRatingMode::Regular;
  if (text == "infinite") return EmergencyRatingMode::Infinite;
  throw ResultFileError(fmt::format("unknown emergency rating mode '{}'", text));
}

std::string to_string(const BigMPolicy& policy) {
  if (policy.kind == BigMPolicy::Kind::PerLine) return "per-line";
  return fmt::format("fixed:{}", policy.value);
}

BigMPolicy parse_big_m(const std::string& text) {
  if (text == "per-line") return BigMPolicy::per_line();
  if (text.rfind("fixed:", 0) == 0) {
    const std::string number = text.substr(6);
    std::size_t used = 0;
    double mw = 0.0;
    try {
      mw = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size())
      throw ResultFileError(fmt::format("bad big-M value in '{}'", text));
    return BigMPolicy::fixed(mw);
  }
  throw ResultFileError(fmt::format("big-M must be 'per-line' or 'fixed:<MW>', got '{}'", text));
}

json options_to_json(const SolveOptions& o) {
  return {
      {"cts_enabled", o.cts_enabled},
      {"z_max", o.z_max},
      {"emergency_rating_mode", to_string(o.emergency_rating_mode)},
      {"mip_gap", o.mip_gap},
      {"big_m", to_string(o.big_m)},
      {"reference_bus", o.reference_bus ? json(*o.reference_bus) : json(nullptr)},
      {"angle_bound", o.angle_bound},
      {"infinite_rating_value", o.infinite_rating_value},
      {"reserve_enabled", o.reserve_enabled},
  };
}

SolveOptions options_from_json(const json& j) {
  try {
    SolveOptions o;
    o.cts_enabled = j.at("cts_enabled").get<bool>();
    o.z_max = j.at("z_max").get<int>();
    o.emergency_rating_mode = parse_emergency_rating_mode(j.at("emergency_rating_mode"));
    o.mip_gap = j.at("mip_gap").get<double>();
    o.big_m = parse_big_m(j.at("big_m"));
    if (!j.at("reference_bus").is_null()) o.reference_bus = j.at("reference_bus").get<int>();
    o.angle_bound = j.at("angle_bound").get<double>();
    o.infinite_rating_value = j.at("infinite_rating_value").get<double>();
    o.reserve_enabled = j.at("reserve_enabled").get<bool>();
    return o;
  } catch (const json::exception& e) {
    throw ResultFileError(fmt::format("bad options block: {}", e.what()));
  }
}

json verification_to_json(const VerificationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    const json residual = std::isfinite(v.residual) ? json(v.residual) : json("inf");
    violations.push_back({{"family", v.family}, {"indices", v.indices}, {"residual", residual}});
  }
  json worst = json::object();
  for (const auto& [family, residual] : report.max_residual)
    worst[family] = std::isfinite(residual) ? json(residual) : json("inf");
  return {{"passed", report.passed()},
          {"violation_count", report.violations.size()},
          {"violations", violations},
          {"max_residual", worst}};
}

json variables_to_json(const SolveResult& result) {
  const std::map<std::string, double> sorted(result.values.begin(), result.values.end());
  json out = json::object();
  for (const auto& [name, value] : sorted) out[name] = value;
  return out;
}

Solution solution_from_result(const Case& c, const ContingencySet& contingencies,
                              const json& result) {
  try {
    const auto& solve = result.at("solve");
    SolveResult r;
    const auto status = parse_solve_status(solve.at("status").get<std::string>());
    if (!status) throw ResultFileError("unknown solve status");
    r.status = *status;
    r.has_solution = solve.at("has_solution").get<bool>();
    if (!r.has_solution) throw ResultFileError("result holds no solution");
    r.objective_value = solve.at("objective").get<double>();
    r.best_bound = solve.at("best_bound").get<double>();
    r.gap = solve.at("gap").get<double>();
    for (const auto& [name, value] : result.at("variables").items())
      r.values.emplace(name, value.get<double>());
    return extract_solution(c, contingencies, r);
  } catch (const json::exception& e) {
    throw ResultFileError(fmt::format("bad result document: {}", e.what()));
  } catch (const SolverError& e) {
    throw ResultFileError(fmt::format("result does not match the case: {}", e.what()));
  }
}

json to_json(const StartupReport& report) {
  json periods = json::array();
  for (std::size_t t = 0; t < report.per_period.size(); ++t)
    if (!report.per_period[t].empty())
      periods.push_back({{"period", t + 1}, {"generators", report.per_period[t]}});
  return {{"total", report.total}, {"periods", periods}};
}

json to_json(const std::vector<SwitchingRow>& rows) {
  json out = json::array();
  for (const auto& r : rows)
    out.push_back({{"period", r.period}, {"outage", r.outage}, {"opened", r.opened}});
  return out;
}

json to_json(const CongestionReport& r) {
  json out = {{"total_cost_scenario_I", r.total_cost_scenario_I},
              {"total_cost_scenario_II", r.total_cost_scenario_II},
              {"congestion_cost", r.congestion_cost}};
  out["reduction_vs_baseline"] = r.reduction_vs_baseline ? json(*r.reduction_vs_baseline) : json(nullptr);
  out["warning"] = r.warning ? json(*r.warning) : json(nullptr);
  return out;
}

json to_json(const OverloadReport& report) {
  json entries = json::array();
  for (const auto& e : report.entries) {
    if (e.congested_without.empty() && e.congested_with.empty()) continue;
    entries.push_back({{"branch", e.branch},
                       {"period", e.period},
                       {"congested_without_cts", e.congested_without},
                       {"congested_with_cts", e.congested_with},
                       {"max_loading_without_cts", e.max_loading_without},
                       {"max_loading_with_cts", e.max_loading_with},
                       {"reduction_pp", e.reduction_pp}});
  }
  return {{"max_reduction_pp", report.max_reduction_pp}, {"entries", entries}};
}

json to_json(const Sweep& sweep) {
  json points = json::array();
  for (const auto& p : sweep.points)
    points.push_back({{"z_max", p.z_max},
                      {"congestion_cost", p.congestion_cost},
                      {"objective", p.objective},
                      {"gap", p.gap}});
  return {{"scenario_II_objective", sweep.scenario_II_objective},
          {"scenario_II_gap", sweep.scenario_II_gap},
          {"points", points},
          {"warnings", sweep.warnings}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResultFileError(fmt::format("cannot open '{}'", path));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ResultFileError(fmt::format("'{}' is not valid JSON: {}", path, e.what()));
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw ResultFileError(fmt::format("cannot write '{}'", path));
  out << doc.dump(2) << '\n';
}

}  // namespace ctscuc
