#include <chrono>
#include <cmath>
#include <cstdlib>

#include <fmt/format.h>
#include <Highs.h>

#include "ctscuc/solver.hpp"

namespace ctscuc {

namespace {

HighsModel to_highs(const MilpModel& m) {
  HighsModel hm;
  HighsLp& lp = hm.lp_;
  lp.num_col_ = static_cast<HighsInt>(m.num_variables());
  lp.num_row_ = static_cast<HighsInt>(m.num_constraints());
  lp.sense_ = ObjSense::kMinimize;
  lp.offset_ = m.objective_offset();
  lp.col_cost_.assign(m.num_variables(), 0.0);
  for (const auto& t : m.objective()) lp.col_cost_[static_cast<std::size_t>(t.var)] += t.coef;

  bool has_integer = false;
  lp.integrality_.assign(m.num_variables(), HighsVarType::kContinuous);
  for (std::size_t j = 0; j < m.num_variables(); ++j) {
    const auto& v = m.variables()[j];
    lp.col_lower_.push_back(v.lower == -kInf ? -kHighsInf : v.lower);
    lp.col_upper_.push_back(v.upper == kInf ? kHighsInf : v.upper);
    if (v.kind == VarKind::Binary) {
      lp.integrality_[j] = HighsVarType::kInteger;
      has_integer = true;
    }
  }
  if (!has_integer) lp.integrality_.clear();

  // Column-wise copy of the row-major constraint list.
  std::vector<HighsInt> count(m.num_variables() + 1, 0);
  for (const auto& c : m.constraints())
    for (const auto& t : c.terms) ++count[static_cast<std::size_t>(t.var) + 1];
  auto& a = lp.a_matrix_;
  a.format_ = MatrixFormat::kColwise;
  a.num_col_ = lp.num_col_;
  a.num_row_ = lp.num_row_;
  a.start_.assign(m.num_variables() + 1, 0);
  for (std::size_t j = 0; j < m.num_variables(); ++j) a.start_[j + 1] = a.start_[j] + count[j + 1];
  a.index_.resize(static_cast<std::size_t>(a.start_.back()));
  a.value_.resize(a.index_.size());
  std::vector<HighsInt> next(a.start_.begin(), a.start_.end() - 1);
  HighsInt row = 0;
  for (const auto& c : m.constraints()) {
    for (const auto& t : c.terms) {
      const auto pos = static_cast<std::size_t>(next[static_cast<std::size_t>(t.var)]++);
      a.index_[pos] = row;
      a.value_[pos] = t.coef;
    }
    ++row;
    switch (c.sense) {
      case RowSense::LessEqual:
        lp.row_lower_.push_back(-kHighsInf);
        lp.row_upper_.push_back(c.rhs);
        break;
      case RowSense::GreaterEqual:
        lp.row_lower_.push_back(c.rhs);
        lp.row_upper_.push_back(kHighsInf);
        break;
      case RowSense::Equal:
        lp.row_lower_.push_back(c.rhs);
        lp.row_upper_.push_back(c.rhs);
        break;
    }
  }
  return hm;
}

void configure(Highs& h, double mip_gap, double time_limit) {
  const char* log = std::getenv(kSolverLogEnvVar);
  h.setOptionValue("output_flag", log != nullptr && *log != '\0');
  h.setOptionValue("mip_rel_gap", mip_gap);
  h.setOptionValue("mip_abs_gap", 1e-6);
  h.setOptionValue("random_seed", 0);
  h.setOptionValue("mip_feasibility_tolerance", 1e-7);
  h.setOptionValue("primal_feasibility_tolerance", 1e-8);
  if (time_limit > 0) h.setOptionValue("time_limit", time_limit);
  if (const char* env = std::getenv(kSolverThreadsEnvVar); env && *env)
    h.setOptionValue("threads", static_cast<HighsInt>(std::atoi(env)));
}

class HighsSolver final : public MipSolver {
 public:
  std::string name() const override { return "highs"; }

  SolveResult solve(const MilpModel& model, double mip_gap, double time_limit) const override {
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;
    auto finish = [&](SolveResult& r) {
      r.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return r;
    };

    if (model.num_variables() == 0) {
      result.status = SolveStatus::OptimalWithinGap;
      result.has_solution = true;
      result.objective_value = result.best_bound = model.objective_offset();
      return finish(result);
    }

    HighsModel hm = to_highs(model);
    Highs highs;
    configure(highs, mip_gap, time_limit);
    if (highs.passModel(hm) == HighsStatus::kError)
      throw SolverError("HiGHS rejected the model");
    if (highs.run() == HighsStatus::kError) throw SolverError("HiGHS failed to run");

    const auto status = highs.getModelStatus();
    const auto& info = highs.getInfo();
    const bool is_mip = !hm.lp_.integrality_.empty();
    const bool feasible_point = info.primal_solution_status == kSolutionStatusFeasible;

    switch (status) {
      case HighsModelStatus::kOptimal:
        result.status = SolveStatus::OptimalWithinGap;
        break;
      case HighsModelStatus::kInfeasible:
      case HighsModelStatus::kUnboundedOrInfeasible:
        result.status = SolveStatus::Infeasible;
        return finish(result);
      case HighsModelStatus::kUnbounded:
        result.status = SolveStatus::Unbounded;
        return finish(result);
      case HighsModelStatus::kTimeLimit:
      case HighsModelStatus::kIterationLimit:
      case HighsModelStatus::kSolutionLimit:
        result.status = SolveStatus::TimeLimit;
        if (!feasible_point) return finish(result);
        break;
      default:
        throw SolverError(fmt::format("HiGHS ended with status '{}'",
                                      highs.modelStatusToString(status)));
    }

    std::vector<double> x = highs.getSolution().col_value;
    double bound = is_mip ? info.mip_dual_bound : info.objective_function_value;

    if (is_mip) {
      round_binaries(model, x);
      // Re-solve the continuous part with the commitment and switching
      // decisions fixed, so continuous values are consistent with exact 0/1.
      HighsModel fixed = hm;
      for (std::size_t j = 0; j < model.num_variables(); ++j) {
        if (model.variables()[j].kind != VarKind::Binary) continue;
        fixed.lp_.col_lower_[j] = fixed.lp_.col_upper_[j] = x[j];
      }
      fixed.lp_.integrality_.clear();
      Highs polish;
      configure(polish, mip_gap, 0.0);
      polish.setOptionValue("primal_feasibility_tolerance", 1e-9);
      if (polish.passModel(fixed) != HighsStatus::kError && polish.run() != HighsStatus::kError &&
          polish.getModelStatus() == HighsModelStatus::kOptimal) {
        const auto& px = polish.getSolution().col_value;
        for (std::size_t j = 0; j < model.num_variables(); ++j)
          if (model.variables()[j].kind != VarKind::Binary) x[j] = px[j];
      }
    }

    result.has_solution = true;
    result.objective_value = model.evaluate_objective(x);
    result.best_bound = std::min(bound, result.objective_value);
    result.gap = std::max(0.0, relative_gap(result.objective_value, result.best_bound));
    result.values.reserve(model.num_variables());
    for (std::size_t j = 0; j < model.num_variables(); ++j)
      result.values.emplace(model.variables()[j].name, x[j]);
    return finish(result);
  }
};

}  // namespace

std::unique_ptr<MipSolver> make_highs_solver() { return std::make_unique<HighsSolver>(); }

}  // namespace ctscuc
