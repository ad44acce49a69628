#include "ctscuc/solver.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

namespace ctscuc {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::OptimalWithinGap: return "OptimalWithinGap";
    case SolveStatus::Infeasible: return "Infeasible";
    case SolveStatus::Unbounded: return "Unbounded";
    case SolveStatus::TimeLimit: return "TimeLimit";
  }
  return "Unknown";
}

std::optional<SolveStatus> parse_solve_status(std::string_view s) {
  for (auto st : {SolveStatus::OptimalWithinGap, SolveStatus::Infeasible, SolveStatus::Unbounded,
                  SolveStatus::TimeLimit})
    if (to_string(st) == s) return st;
  return std::nullopt;
}

double SolveResult::value(const std::string& name) const {
  auto it = values.find(name);
  if (it == values.end()) throw SolverError(fmt::format("no value for variable {}", name));
  return it->second;
}

void round_binaries(const MilpModel& model, std::vector<double>& values) {
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variables()[j];
    if (v.kind != VarKind::Binary) continue;
    const double rounded = std::round(values[j]);
    if (std::abs(values[j] - rounded) > kIntegralityTolerance || (rounded != 0.0 && rounded != 1.0))
      throw SolverError(fmt::format("binary {} has non-integral value {}", v.name, values[j]));
    values[j] = rounded;
  }
}

std::unique_ptr<MipSolver> make_solver(std::string_view backend) {
  std::string name(backend);
  if (name.empty()) {
    if (const char* env = std::getenv(kSolverEnvVar); env && *env) name = env;
  }
  if (name.empty() || name == "highs") return make_highs_solver();
  throw SolverError(fmt::format("backend unavailable: '{}' (built-in backends: highs)", name));
}

SolveResult solve(const MilpModel& model, double mip_gap, double time_limit) {
  return make_solver()->solve(model, mip_gap, time_limit);
}

}  // namespace ctscuc
