#include "ctscuc/dc_flow.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace ctscuc {

Topology Topology::all_except(const Case& c, std::span<const int> removed) {
  Topology topo;
  topo.grid = &c;
  for (const auto& k : c.branches)
    if (std::find(removed.begin(), removed.end(), k.id) == removed.end())
      topo.active_branches.push_back(k.id);
  return topo;
}

namespace {

struct ActiveBranch {
  std::size_t position;
  std::size_t from;
  std::size_t to;
  double bb;  // susceptance * base_mva, MW/rad
};

std::vector<ActiveBranch> active_branches(const Topology& topo) {
  if (topo.grid == nullptr) throw FlowError("topology has no case");
  const Case& c = *topo.grid;
  std::map<int, std::size_t> bus_pos, branch_pos;
  for (std::size_t i = 0; i < c.buses.size(); ++i) bus_pos[c.buses[i].id] = i;
  for (std::size_t i = 0; i < c.branches.size(); ++i) branch_pos[c.branches[i].id] = i;
  std::vector<ActiveBranch> out;
  for (int id : topo.active_branches) {
    auto it = branch_pos.find(id);
    if (it == branch_pos.end()) throw FlowError(fmt::format("topology names unknown branch {}", id));
    const auto& k = c.branches[it->second];
    out.push_back({it->second, bus_pos.at(k.from_bus), bus_pos.at(k.to_bus),
                   k.susceptance * c.base_mva});
  }
  return out;
}

// Component label per bus position.
std::vector<int> label_components(std::size_t num_buses, const std::vector<ActiveBranch>& branches) {
  std::vector<std::size_t> parent(num_buses);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& b : branches) parent[find(b.from)] = find(b.to);
  std::vector<int> label(num_buses, -1);
  std::map<std::size_t, int> root_label;
  for (std::size_t i = 0; i < num_buses; ++i) {
    auto [it, inserted] = root_label.emplace(find(i), static_cast<int>(root_label.size()));
    label[i] = it->second;
  }
  return label;
}

}  // namespace

int count_components(const Topology& topology) {
  auto branches = active_branches(topology);
  auto label = label_components(topology.grid->buses.size(), branches);
  return label.empty() ? 0 : *std::max_element(label.begin(), label.end()) + 1;
}

FlowSolution dc_flow(const Topology& topology, std::span<const double> injections,
                     int reference_bus, double tolerance) {
  const auto branches = active_branches(topology);
  const Case& c = *topology.grid;
  const std::size_t N = c.buses.size();
  if (injections.size() != N)
    throw FlowError(fmt::format("expected {} injections, got {}", N, injections.size()));

  const auto label = label_components(N, branches);
  const int num_components = N == 0 ? 0 : *std::max_element(label.begin(), label.end()) + 1;

  FlowSolution out;
  out.angles.assign(N, 0.0);
  out.flows.assign(c.branches.size(), 0.0);

  for (int comp = 0; comp < num_components; ++comp) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < N; ++i)
      if (label[i] == comp) members.push_back(i);
    double net = 0.0;
    for (auto i : members) net += injections[i];
    if (std::abs(net) > tolerance)
      throw FlowError(fmt::format("island containing bus {} has net injection {} MW",
                                  c.buses[members.front()].id, net));
    if (members.size() == 1) continue;

    std::size_t slack = members.front();
    for (auto i : members)
      if (c.buses[i].id == reference_bus) slack = i;

    // reduced index for every non-slack member
    std::vector<long> reduced(N, -1);
    long dim = 0;
    for (auto i : members)
      if (i != slack) reduced[i] = dim++;

    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::VectorXd p(dim);
    for (auto i : members)
      if (reduced[i] >= 0) p(reduced[i]) = injections[i];
    for (const auto& b : branches) {
      if (label[b.from] != comp) continue;
      const long f = reduced[b.from], t = reduced[b.to];
      if (f >= 0) B(f, f) += b.bb;
      if (t >= 0) B(t, t) += b.bb;
      if (f >= 0 && t >= 0) {
        B(f, t) -= b.bb;
        B(t, f) -= b.bb;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible())
      throw FlowError(fmt::format("singular susceptance system around bus {}",
                                  c.buses[members.front()].id));
    Eigen::VectorXd theta = lu.solve(p);
    for (auto i : members)
      if (reduced[i] >= 0) out.angles[i] = theta(reduced[i]);
  }

  for (const auto& b : branches)
    out.flows[b.position] = b.bb * (out.angles[b.from] - out.angles[b.to]);
  return out;
}

FlowSolution dc_flow(const Topology& topology, std::span<const double> injections) {
  if (topology.grid == nullptr) throw FlowError("topology has no case");
  return dc_flow(topology, injections, topology.grid->lowest_bus_id());
}

}  // namespace ctscuc
