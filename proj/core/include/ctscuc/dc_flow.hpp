#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "ctscuc/network.hpp"

namespace ctscuc {

/// The in-service network: a case plus the set of energised branches.
struct Topology {
  const Case* grid = nullptr;
  std::vector<int> active_branches;  // branch ids

  /// Every branch of `c` except the ids in `removed`.
  static Topology all_except(const Case& c, std::span<const int> removed);
  static Topology full(const Case& c) { return all_except(c, {}); }
};

struct FlowSolution {
  std::vector<double> flows;   // MW, per branch position; 0 for inactive branches
  std::vector<double> angles;  // rad, per bus position
};

class FlowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tolerance (MW) on the net injection of each connected component.
inline constexpr double kInjectionTolerance = 1e-6;

/// Lossless DC power flow.
///
/// `injections` is MW per bus position (generation minus load). Each
/// connected component is solved on its own reduced susceptance system with
/// its slack bus at angle zero; the slack of the component holding
/// `reference_bus` is that bus, otherwise its lowest-position bus. A component
/// whose injections do not sum to zero within `tolerance` is an error.
FlowSolution dc_flow(const Topology& topology, std::span<const double> injections,
                     int reference_bus, double tolerance = kInjectionTolerance);

/// As above with the lowest bus id as reference.
FlowSolution dc_flow(const Topology& topology, std::span<const double> injections);

/// Number of connected components formed by the active branches.
int count_components(const Topology& topology);

}  // namespace ctscuc
