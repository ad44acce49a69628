#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "ctscuc/formulation.hpp"
#include "ctscuc/network.hpp"
#include "ctscuc/solution.hpp"
#include "ctscuc/solver.hpp"

namespace ctscuc {

inline constexpr double kVerifyTolerance = 1e-3;  // MW, and $ for the objective

struct Violation {
  std::string family;   // constraint family, e.g. "flow_def"
  std::string indices;  // e.g. "k=4,t=9"
  double residual = 0.0;
};

struct VerificationReport {
  std::vector<Violation> violations;
  std::map<std::string, double> max_residual;  // per family, violated or not

  bool passed() const { return violations.empty(); }
  std::size_t count(const std::string& family) const;
};

/// Re-evaluates every constraint family, the objective and the post-contingency
/// DC power flows of `solution` directly from case data.
VerificationReport verify_solution(const Case& c, const ContingencySet& contingencies,
                                   const SolveOptions& options, const Solution& solution,
                                   double tolerance = kVerifyTolerance);

/// Commitment and base-case dispatch for one period.
struct FixedDispatch {
  int period = 0;  // 0-based
  std::vector<bool> committed;  // per generator position
  std::vector<double> output;   // MW, per generator position

  static FixedDispatch from_solution(const Solution& s, int period);
};

struct BruteForceResult {
  std::vector<int> opened;           // ascending branch ids; empty when nothing helps
  double max_loading = 0.0;          // max |flow| / emergency rating after switching
  double unswitched_loading = 0.0;   // same, with only the contingency applied
  bool no_improvement = false;
  std::size_t subsets_evaluated = 0;
  std::vector<double> flows;         // MW per branch position for `opened`

  double overload() const { return max_loading > 1.0 ? max_loading - 1.0 : 0.0; }
};

inline constexpr std::size_t kBruteForceSubsetLimit = 100000;

/// Exhaustive corrective switching for one contingency.
///
/// Every subset of at most `z_max` switchable, non-radial branches (other
/// than the outaged one) is tried; connected topologies are evaluated after a
/// redispatch confined to the 10-minute ramp window, which minimises the
/// largest |flow| / emergency rating. The best subset wins, ties going to
/// the lexicographically smallest one.
BruteForceResult brute_force_cts(const Case& c, const FixedDispatch& dispatch, int contingency,
                                 int z_max, const MipSolver& solver);

}  // namespace ctscuc
