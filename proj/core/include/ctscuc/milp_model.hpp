#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ctscuc {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class VarKind { Continuous, Binary };
enum class RowSense { LessEqual, GreaterEqual, Equal };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lower = 0.0;
  double upper = kInf;
};

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string name;
  std::vector<Term> terms;
  RowSense sense = RowSense::LessEqual;
  double rhs = 0.0;
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver-independent minimisation model. Row and column names encode their
/// indices (e.g. `pg[g=3,t=7]`) and are unique; insertion order is preserved
/// so that identical build sequences give identical models.
class MilpModel {
 public:
  int add_variable(std::string name, VarKind kind, double lower, double upper);
  int add_continuous(std::string name, double lower, double upper) {
    return add_variable(std::move(name), VarKind::Continuous, lower, upper);
  }
  int add_binary(std::string name, double lower = 0.0, double upper = 1.0) {
    return add_variable(std::move(name), VarKind::Binary, lower, upper);
  }
  void set_bounds(int var, double lower, double upper);

  /// Repeated variables are merged; terms whose merged coefficient is exactly
  /// zero are dropped.
  int add_constraint(std::string name, std::vector<Term> terms, RowSense sense, double rhs);

  void add_objective_term(int var, double coef);
  double objective_offset() const { return objective_offset_; }
  void set_objective_offset(double v) { objective_offset_ = v; }

  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<Term>& objective() const { return objective_; }
  const Variable& variable(int index) const { return variables_.at(static_cast<std::size_t>(index)); }

  std::optional<int> find_variable(std::string_view name) const;
  /// Index of a declared variable; throws ModelError when absent.
  int variable_index(std::string_view name) const;
  std::optional<int> find_constraint(std::string_view name) const;

  std::size_t num_variables() const { return variables_.size(); }
  std::size_t num_constraints() const { return constraints_.size(); }
  std::size_t num_binaries() const;

  /// Number of rows whose name starts with `family[`.
  std::size_t count_family(std::string_view family) const;

  double evaluate_objective(const std::vector<double>& values) const;

  /// CPLEX-style LP text. Names are written verbatim.
  void write_lp(std::ostream& os) const;
  std::string to_lp() const;

 private:
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<Term> objective_;
  std::unordered_map<std::string, int> var_index_;
  std::unordered_map<std::string, int> row_index_;
  std::unordered_map<int, std::size_t> objective_pos_;
  double objective_offset_ = 0.0;
};

/// Family prefix of a row or column name: `gen_min[g=1,t=2]` -> `gen_min`.
std::string_view name_family(std::string_view name);

}  // namespace ctscuc
