#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctscuc/milp_model.hpp"
#include "ctscuc/network.hpp"

namespace ctscuc {

enum class EmergencyRatingMode { Regular, Infinite };

struct BigMPolicy {
  enum class Kind { PerLine, Fixed };
  Kind kind = Kind::PerLine;
  double value = 0.0;  // MW, used by Fixed

  static BigMPolicy per_line() { return {}; }
  static BigMPolicy fixed(double mw) { return {Kind::Fixed, mw}; }
  bool operator==(const BigMPolicy&) const = default;
};

struct SolveOptions {
  bool cts_enabled = false;
  int z_max = 1;
  EmergencyRatingMode emergency_rating_mode = EmergencyRatingMode::Regular;
  double mip_gap = 0.01;
  BigMPolicy big_m;
  std::optional<int> reference_bus;  // defaults to the lowest bus id
  double angle_bound = 0.6;          // rad
  double infinite_rating_value = 1e4;  // MW
  // System reserve rows (largest-unit cover). Off only for single-unit studies,
  // where the rows force every output to zero.
  bool reserve_enabled = true;

  bool operator==(const SolveOptions&) const = default;
};

class FormulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated SolveOptions invariants; empty when usable.
std::vector<std::string> validate_options(const SolveOptions& options);

int resolve_reference_bus(const Case& c, const SolveOptions& options);

/// Flow limit applied to a post-contingency flow on `branch`.
double contingency_rating(const Branch& branch, const SolveOptions& options);

struct BigM {
  double value = 0.0;
  std::optional<std::string> warning;
};

/// Big-M for the switched flow-definition pair of `branch`.
BigM compute_big_m(const Branch& branch, const SolveOptions& options, double base_mva = 100.0);

/// Traceable row/column names. Indices are user-facing ids and 1-based periods.
namespace names {
std::string pg(int g, int t);
std::string u(int g, int t);
std::string v(int g, int t);
std::string r(int g, int t);
std::string pk(int k, int t);
std::string theta(int n, int t);
std::string pgc(int g, int c, int t);
std::string pkc(int k, int c, int t);
std::string thetac(int n, int c, int t);
std::string z(int c, int k, int t);
}  // namespace names

void add_base_generator_block(MilpModel& model, const Case& c, const SolveOptions& options = {});
void add_objective(MilpModel& model, const Case& c);
void add_base_flow_block(MilpModel& model, const Case& c, const SolveOptions& options = {});
void add_contingency_generator_block(MilpModel& model, const Case& c,
                                     const ContingencySet& contingencies);
void add_contingency_flow_block(MilpModel& model, const Case& c,
                                const ContingencySet& contingencies, const SolveOptions& options);

/// Complete model: base generation, base flow, objective, then every
/// contingency block in ascending (c, t) order.
MilpModel assemble_model(const Case& c, const ContingencySet& contingencies,
                         const SolveOptions& options);

}  // namespace ctscuc
