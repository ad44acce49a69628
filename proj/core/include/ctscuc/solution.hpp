#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ctscuc/network.hpp"
#include "ctscuc/solver.hpp"

namespace ctscuc {

/// Dense row-major array indexed by positions (never by ids).
template <std::size_t Rank>
class Grid {
 public:
  Grid() = default;
  explicit Grid(std::array<std::size_t, Rank> dims, double fill = 0.0) : dims_(dims) {
    std::size_t n = 1;
    for (auto d : dims_) n *= d;
    data_.assign(n, fill);
  }

  template <typename... I>
  double& operator()(I... idx) {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <typename... I>
  double operator()(I... idx) const {
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  std::size_t dim(std::size_t axis) const { return dims_[axis]; }
  bool operator==(const Grid&) const = default;

 private:
  std::size_t offset(std::array<std::size_t, Rank> idx) const {
    std::size_t off = 0;
    for (std::size_t a = 0; a < Rank; ++a) off = off * dims_[a] + idx[a];
    return off;
  }

  std::array<std::size_t, Rank> dims_{};
  std::vector<double> data_;
};

/// Every decision of the model, addressed by position.
///
/// Base-case grids are [generator|branch|bus][period]; contingency grids are
/// [contingency position][generator|branch|bus][period], where contingency
/// position indexes ContingencySet::members. Periods are 0-based here.
struct Solution {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;

  Grid<2> pg, u, v, r;  // [g][t]
  Grid<2> pk;           // [k][t]
  Grid<2> theta;        // [n][t]
  Grid<3> pgc;          // [c][g][t]
  Grid<3> pkc;          // [c][k][t]
  Grid<3> thetac;       // [c][n][t]
  Grid<3> z;            // [c][k][t]
};

/// Pulls every variable of the assembled model out of `result` by name.
/// Throws SolverError when a variable is missing.
Solution extract_solution(const Case& c, const ContingencySet& contingencies,
                          const SolveResult& result);

}  // namespace ctscuc
