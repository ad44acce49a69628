#pragma once

#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ctscuc {

struct Bus {
  int id = 0;
  std::string name;
};

struct Generator {
  int id = 0;
  int bus = 0;
  double p_min = 0.0;         // MW
  double p_max = 0.0;         // MW
  double cost_energy = 0.0;   // $/MWh
  double cost_noload = 0.0;   // $/h
  double cost_startup = 0.0;  // $
  double ramp_hr = 0.0;       // MW/h
  double ramp_su = 0.0;       // MW
  double ramp_sd = 0.0;       // MW
  double ramp_10 = 0.0;       // MW per 10 min
  int min_up = 1;             // h
  int min_down = 1;           // h
  bool initial_on = false;
  double initial_output = 0.0;     // MW
  int initial_hours_in_state = 0;  // h; the parser defaults it to max(min_up, min_down)
};

struct Branch {
  int id = 0;
  int from_bus = 0;
  int to_bus = 0;
  double susceptance = 0.0;       // per unit on Case::base_mva
  double rating_long_term = 0.0;  // MW
  double rating_emergency = 0.0;  // MW
  bool switchable = true;
  // Computed by mark_radial_branches(); never read from a case file.
  bool radial = false;
};

/// A power system over a scheduling horizon.
///
/// Demand is stored period-major: demand[t][i] is the load in MW at the bus
/// buses[i] during period t (0-based). Identifiers are the user-facing ids
/// from the case file; positions are indices into the vectors.
struct Case {
  std::string name;
  std::string notes;
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Generator> generators;
  std::vector<Branch> branches;
  std::vector<std::vector<double>> demand;
  int horizon = 0;
  bool radial_flags_computed = false;

  std::size_t bus_position(int bus_id) const;
  std::size_t branch_position(int branch_id) const;
  std::size_t generator_position(int generator_id) const;
  bool has_bus(int bus_id) const;

  double demand_at(std::size_t bus_pos, int period) const {
    return demand.at(static_cast<std::size_t>(period)).at(bus_pos);
  }
  double total_demand(int period) const;
  int lowest_bus_id() const;
};

/// Non-radial branch ids in ascending order.
struct ContingencySet {
  std::vector<int> members;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
};

class CaseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, Reference, DuplicateId, Invariant, Topology };

  CaseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Parses the JSON case document. Radial flags are left unset.
Case parse_case(std::string_view text);
Case read_case_file(const std::string& path);

/// Inverse of parse_case; the computed radial flags are not written.
std::string serialize_case(const Case& c);

/// Every violated invariant, one human-readable line each. Empty means valid.
std::vector<std::string> validate_case(const Case& c);

bool is_connected(const Case& c);

/// Branch ids whose removal disconnects the network (bridges).
/// Throws CaseError(Topology) when the network is already disconnected.
std::set<int> find_radial_branches(const Case& c);

/// Runs find_radial_branches and stores the result in Branch::radial.
std::set<int> mark_radial_branches(Case& c);

/// All non-radial branches, ascending by id. Requires mark_radial_branches.
ContingencySet build_contingency_set(const Case& c);

/// The first `periods` periods of `c`; everything else is unchanged.
Case truncate_horizon(const Case& c, int periods);

/// Parses, validates and marks radial branches. Throws CaseError on any problem.
Case load_case(const std::string& path);

}  // namespace ctscuc
