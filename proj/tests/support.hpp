#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ctscuc/network.hpp"

namespace ctscuc::testing {

inline std::string data_path(const std::string& file) { return std::string(CTSCUC_DATA_DIR) + "/" + file; }

struct Edge {
  int from;
  int to;
};

// Buses 1..n, branches 1..edges.size() with unit-ish susceptance and roomy ratings.
inline Case network_case(int n, const std::vector<Edge>& edges, double susceptance = 10.0) {
  Case c;
  c.name = "test";
  c.horizon = 1;
  for (int i = 1; i <= n; ++i) c.buses.push_back({i, "b" + std::to_string(i)});
  int id = 1;
  for (const auto& e : edges) {
    Branch k;
    k.id = id++;
    k.from_bus = e.from;
    k.to_bus = e.to;
    k.susceptance = susceptance;
    k.rating_long_term = 1000.0;
    k.rating_emergency = 1200.0;
    c.branches.push_back(k);
  }
  c.demand.assign(1, std::vector<double>(static_cast<std::size_t>(n), 0.0));
  return c;
}

inline Case triangle_case() { return network_case(3, {{1, 2}, {2, 3}, {1, 3}}); }
inline Case path_case() { return network_case(3, {{1, 2}, {2, 3}}); }

inline Generator make_generator(int id, int bus, double p_min, double p_max, double c_energy,
                                double c_noload, double c_startup) {
  Generator g;
  g.id = id;
  g.bus = bus;
  g.p_min = p_min;
  g.p_max = p_max;
  g.cost_energy = c_energy;
  g.cost_noload = c_noload;
  g.cost_startup = c_startup;
  g.ramp_hr = g.ramp_su = g.ramp_sd = p_max;
  g.ramp_10 = p_max;
  g.min_up = g.min_down = 1;
  g.initial_hours_in_state = 1;
  return g;
}

// One bus, one unit (10..100 MW, 10 $/MWh, 5 $/h, 100 $ startup, off), no lines.
inline Case single_unit_case(double load) {
  Case c;
  c.name = "single";
  c.horizon = 1;
  c.buses.push_back({1, "only"});
  c.generators.push_back(make_generator(1, 1, 10, 100, 10, 5, 100));
  c.demand = {{load}};
  return c;
}

// Brute-force bridge oracle: remove each edge and test connectivity with union-find.
inline std::set<int> bridges_by_removal(const Case& c) {
  auto connected_without = [&](std::size_t skip) {
    std::vector<std::size_t> parent(c.buses.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::size_t parts = c.buses.size();
    for (std::size_t i = 0; i < c.branches.size(); ++i) {
      if (i == skip) continue;
      auto a = find(c.bus_position(c.branches[i].from_bus));
      auto b = find(c.bus_position(c.branches[i].to_bus));
      if (a != b) {
        parent[a] = b;
        --parts;
      }
    }
    return parts == 1;
  };
  std::set<int> out;
  for (std::size_t i = 0; i < c.branches.size(); ++i)
    if (!connected_without(i)) out.insert(c.branches[i].id);
  return out;
}

// Connected multigraph: a random spanning tree plus random extra edges (parallels allowed).
inline Case random_multigraph(std::mt19937& rng, int max_vertices, int max_edges) {
  std::uniform_int_distribution<int> nv(2, max_vertices);
  const int n = nv(rng);
  std::vector<Edge> edges;
  for (int v = 2; v <= n; ++v) {
    std::uniform_int_distribution<int> pick(1, v - 1);
    edges.push_back({pick(rng), v});
  }
  std::uniform_int_distribution<int> extra(0, max_edges - static_cast<int>(edges.size()));
  std::uniform_int_distribution<int> bus(1, n);
  for (int e = extra(rng); e > 0; --e) {
    int a = bus(rng), b = bus(rng);
    while (b == a) b = bus(rng);
    edges.push_back({a, b});
  }
  std::shuffle(edges.begin(), edges.end(), rng);
  return network_case(n, edges);
}

}  // namespace ctscuc::testing
