#include "ctscuc/milp_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

namespace ctscuc {

int MilpModel::add_variable(std::string name, VarKind kind, double lower, double upper) {
  if (lower > upper)
    throw ModelError(fmt::format("variable {}: lower bound {} exceeds upper bound {}", name, lower,
                                 upper));
  const int index = static_cast<int>(variables_.size());
  auto [it, inserted] = var_index_.emplace(name, index);
  if (!inserted) throw ModelError(fmt::format("duplicate variable name {}", name));
  variables_.push_back({std::move(name), kind, lower, upper});
  return index;
}

void MilpModel::set_bounds(int var, double lower, double upper) {
  auto& v = variables_.at(static_cast<std::size_t>(var));
  if (lower > upper)
    throw ModelError(fmt::format("variable {}: lower bound {} exceeds upper bound {}", v.name,
                                 lower, upper));
  v.lower = lower;
  v.upper = upper;
}

int MilpModel::add_constraint(std::string name, std::vector<Term> terms, RowSense sense,
                              double rhs) {
  // merge duplicates, keeping first-occurrence order
  std::vector<Term> merged;
  merged.reserve(terms.size());
  std::map<int, std::size_t> where;
  for (const auto& t : terms) {
    if (t.var < 0 || static_cast<std::size_t>(t.var) >= variables_.size())
      throw ModelError(fmt::format("constraint {} references undeclared variable {}", name, t.var));
    auto [it, inserted] = where.emplace(t.var, merged.size());
    if (inserted)
      merged.push_back(t);
    else
      merged[it->second].coef += t.coef;
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });

  const int index = static_cast<int>(constraints_.size());
  auto [it, inserted] = row_index_.emplace(name, index);
  if (!inserted) throw ModelError(fmt::format("duplicate constraint name {}", name));
  constraints_.push_back({std::move(name), std::move(merged), sense, rhs});
  return index;
}

void MilpModel::add_objective_term(int var, double coef) {
  if (var < 0 || static_cast<std::size_t>(var) >= variables_.size())
    throw ModelError(fmt::format("objective references undeclared variable {}", var));
  auto it = objective_pos_.find(var);
  if (it == objective_pos_.end()) {
    objective_pos_.emplace(var, objective_.size());
    objective_.push_back({var, coef});
  } else {
    objective_[it->second].coef += coef;
  }
}

std::optional<int> MilpModel::find_variable(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

int MilpModel::variable_index(std::string_view name) const {
  auto idx = find_variable(name);
  if (!idx) throw ModelError(fmt::format("undeclared variable {}", name));
  return *idx;
}

std::optional<int> MilpModel::find_constraint(std::string_view name) const {
  auto it = row_index_.find(std::string(name));
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

std::size_t MilpModel::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) {
    return v.kind == VarKind::Binary;
  }));
}

std::size_t MilpModel::count_family(std::string_view family) const {
  return static_cast<std::size_t>(std::count_if(constraints_.begin(), constraints_.end(), [&](const Constraint& c) {
    return name_family(c.name) == family;
  }));
}

double MilpModel::evaluate_objective(const std::vector<double>& values) const {
  double total = objective_offset_;
  for (const auto& t : objective_) total += t.coef * values.at(static_cast<std::size_t>(t.var));
  return total;
}

namespace {

std::string lp_number(double v) { return fmt::format("{:.17g}", v); }

void write_linear(std::ostream& os, const MilpModel& m, const std::vector<Term>& terms) {
  if (terms.empty()) {
    os << " 0";
    return;
  }
  int on_line = 0;
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << lp_number(std::abs(t.coef)) << ' ' << m.variable(t.var).name;
    if (++on_line == 6) {
      os << "\n   ";
      on_line = 0;
    }
  }
}

}  // namespace

void MilpModel::write_lp(std::ostream& os) const {
  os << "\\ ctscuc model: " << variables_.size() << " columns, " << constraints_.size()
     << " rows\n";
  os << "Minimize\n obj:";
  write_linear(os, *this, objective_);
  if (objective_offset_ != 0.0) os << " + " << lp_number(objective_offset_);
  os << "\nSubject To\n";
  for (const auto& c : constraints_) {
    os << ' ' << c.name << ':';
    write_linear(os, *this, c.terms);
    switch (c.sense) {
      case RowSense::LessEqual: os << " <= "; break;
      case RowSense::GreaterEqual: os << " >= "; break;
      case RowSense::Equal: os << " = "; break;
    }
    os << lp_number(c.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const auto& v : variables_) {
    if (v.kind == VarKind::Binary && v.lower == 0.0 && v.upper == 1.0) continue;
    if (v.lower == -kInf && v.upper == kInf) {
      os << ' ' << v.name << " free\n";
    } else if (v.lower == v.upper) {
      os << ' ' << v.name << " = " << lp_number(v.lower) << '\n';
    } else {
      os << ' ' << (v.lower == -kInf ? std::string("-inf") : lp_number(v.lower)) << " <= " << v.name
         << " <= " << (v.upper == kInf ? std::string("+inf") : lp_number(v.upper)) << '\n';
    }
  }
  bool header = false;
  for (const auto& v : variables_) {
    if (v.kind != VarKind::Binary) continue;
    if (!header) {
      os << "Binaries\n";
      header = true;
    }
    os << ' ' << v.name << '\n';
  }
  os << "End\n";
}

std::string MilpModel::to_lp() const {
  std::ostringstream os;
  write_lp(os);
  return os.str();
}

std::string_view name_family(std::string_view name) {
  auto pos = name.find('[');
  return pos == std::string_view::npos ? name : name.substr(0, pos);
}

}  // namespace ctscuc
