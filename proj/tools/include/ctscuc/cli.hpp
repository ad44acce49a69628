#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ctscuc/formulation.hpp"

namespace ctscuc::cli {

enum class Command { Solve, Verify, Report, SweepZmax };

struct RunConfig {
  Command command = Command::Solve;
  std::string case_path;
  std::optional<int> periods;  // keep only the first N periods of the case
  SolveOptions options;
  double time_limit = 0.0;  // s; 0 means none
  std::string output_path;  // result document; empty means none
  std::optional<std::string> compare_path;
  std::optional<std::string> result_path;  // input of verify and report
  std::vector<std::string> zmax_values;    // integers or "all"
  std::optional<std::string> csv_path;
  std::optional<std::string> lp_path;
};

namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kUnexpected = 1;
inline constexpr int kInfeasible = 2;
inline constexpr int kInputError = 3;
inline constexpr int kVerificationFailed = 4;
inline constexpr int kSolverFailure = 5;  // time limit, unbounded, backend error
}  // namespace exit_code

int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Parses the command line and runs it.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ctscuc::cli
