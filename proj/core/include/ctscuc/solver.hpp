#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ctscuc/milp_model.hpp"

namespace ctscuc {

enum class SolveStatus { OptimalWithinGap, Infeasible, Unbounded, TimeLimit };

std::string_view to_string(SolveStatus s);
std::optional<SolveStatus> parse_solve_status(std::string_view s);

struct SolveResult {
  SolveStatus status = SolveStatus::Infeasible;
  bool has_solution = false;
  double objective_value = 0.0;
  double best_bound = 0.0;
  // (objective - bound) / max(1, |objective|)
  double gap = 0.0;
  std::unordered_map<std::string, double> values;
  double wall_time = 0.0;  // s

  double value(const std::string& name) const;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kIntegralityTolerance = 1e-6;

inline double relative_gap(double objective, double bound) {
  const double scale = std::max(1.0, objective < 0 ? -objective : objective);
  return (objective - bound) / scale;
}

/// A MILP backend. Implementations must be safe to use from several threads
/// on distinct models.
class MipSolver {
 public:
  virtual ~MipSolver() = default;
  virtual std::string name() const = 0;
  virtual SolveResult solve(const MilpModel& model, double mip_gap, double time_limit) const = 0;
};

/// Environment variable naming the backend ("highs" is the only one built in).
inline constexpr const char* kSolverEnvVar = "CTSCUC_SOLVER";
/// Environment variable holding a backend thread count (optional).
inline constexpr const char* kSolverThreadsEnvVar = "CTSCUC_SOLVER_THREADS";
/// Environment variable; any non-empty value turns on backend logging (stdout).
inline constexpr const char* kSolverLogEnvVar = "CTSCUC_SOLVER_LOG";

/// Backend by name; an empty name consults CTSCUC_SOLVER, then defaults to HiGHS.
/// Throws SolverError("backend unavailable") for unknown names.
std::unique_ptr<MipSolver> make_solver(std::string_view backend = {});

/// solve() with the default backend. Binary values come back as exact 0/1.
SolveResult solve(const MilpModel& model, double mip_gap, double time_limit);

/// Rounds binary values to exact integers, throwing SolverError for any value
/// farther than kIntegralityTolerance from {0, 1}.
void round_binaries(const MilpModel& model, std::vector<double>& values);

std::unique_ptr<MipSolver> make_highs_solver();

}  // namespace ctscuc
