#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "ctscuc/dc_flow.hpp"
#include "ctscuc/verifier.hpp"

namespace ctscuc {

FixedDispatch FixedDispatch::from_solution(const Solution& s, int period) {
  FixedDispatch d;
  d.period = period;
  for (std::size_t g = 0; g < s.pg.dim(0); ++g) {
    d.committed.push_back(std::round(s.u(g, period)) == 1.0);
    d.output.push_back(s.pg(g, period));
  }
  return d;
}

namespace {

double binomial_sum(std::size_t n, int k_max) {
  double total = 0.0, term = 1.0;
  for (int k = 0; k <= k_max && static_cast<std::size_t>(k) <= n; ++k) {
    total += term;
    term = term * static_cast<double>(n - static_cast<std::size_t>(k)) / (k + 1);
  }
  return total;
}

struct Evaluation {
  double loading = kInf;
  std::vector<double> flows;
};

// Minimise max |flow| / emergency rating over generator outputs in the
// 10-minute window, with flows expressed through the topology's PTDFs.
Evaluation evaluate(const Case& c, const FixedDispatch& d, const Topology& topo, int reference,
                    const MipSolver& solver) {
  const std::size_t N = c.buses.size();
  const std::size_t G = c.generators.size();
  const int slack = reference;
  const std::size_t slack_pos = c.bus_position(slack);

  // ptdf[n][k]: flow on k for +1 MW at bus n withdrawn at the slack
  std::vector<std::vector<double>> ptdf(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (n == slack_pos) {
      ptdf[n].assign(c.branches.size(), 0.0);
      continue;
    }
    std::vector<double> inj(N, 0.0);
    inj[n] = 1.0;
    inj[slack_pos] = -1.0;
    ptdf[n] = dc_flow(topo, inj, slack).flows;
  }

  std::vector<double> demand(N);
  double total_demand = 0.0;
  for (std::size_t n = 0; n < N; ++n) total_demand += demand[n] = c.demand_at(n, d.period);

  MilpModel lp;
  std::vector<int> p;
  for (std::size_t g = 0; g < G; ++g) {
    const auto& gen = c.generators[g];
    double lo = 0.0, hi = 0.0;
    if (d.committed[g]) {
      lo = std::max(gen.p_min, d.output[g] - gen.ramp_10);
      hi = std::min(gen.p_max, d.output[g] + gen.ramp_10);
      hi = std::max(hi, lo);
    }
    p.push_back(lp.add_continuous(fmt::format("p[g={}]", gen.id), lo, hi));
  }
  const int s = lp.add_continuous("s", 0.0, kInf);
  lp.add_objective_term(s, 1.0);

  std::vector<Term> balance;
  for (int pv : p) balance.push_back({pv, 1.0});
  lp.add_constraint("balance", std::move(balance), RowSense::Equal, total_demand);

  std::vector<std::size_t> gen_bus(G);
  for (std::size_t g = 0; g < G; ++g) gen_bus[g] = c.bus_position(c.generators[g].bus);
  for (int kid : topo.active_branches) {
    const std::size_t k = c.branch_position(kid);
    const double rating = c.branches[k].rating_emergency;
    double load_flow = 0.0;
    for (std::size_t n = 0; n < N; ++n) load_flow += ptdf[n][k] * demand[n];
    std::vector<Term> terms;
    for (std::size_t g = 0; g < G; ++g) terms.push_back({p[g], ptdf[gen_bus[g]][k]});
    auto hi = terms, lo = terms;
    hi.push_back({s, -rating});
    lo.push_back({s, rating});
    lp.add_constraint(fmt::format("hi[k={}]", kid), std::move(hi), RowSense::LessEqual, load_flow);
    lp.add_constraint(fmt::format("lo[k={}]", kid), std::move(lo), RowSense::GreaterEqual, load_flow);
  }

  const auto res = solver.solve(lp, 0.0, 0.0);
  if (res.status != SolveStatus::OptimalWithinGap) return {};  // ramp window cannot meet demand

  std::vector<double> inj(N, 0.0);
  for (std::size_t n = 0; n < N; ++n) inj[n] = -demand[n];
  for (std::size_t g = 0; g < G; ++g)
    inj[gen_bus[g]] += res.value(fmt::format("p[g={}]", c.generators[g].id));
  Evaluation e;
  e.flows = dc_flow(topo, inj, slack, 1e-6 * std::max(1.0, total_demand)).flows;
  e.loading = 0.0;
  for (int kid : topo.active_branches) {
    const std::size_t k = c.branch_position(kid);
    e.loading = std::max(e.loading, std::abs(e.flows[k]) / c.branches[k].rating_emergency);
  }
  return e;
}

}  // namespace

BruteForceResult brute_force_cts(const Case& c, const FixedDispatch& dispatch, int contingency,
                                 int z_max, const MipSolver& solver) {
  if (dispatch.committed.size() != c.generators.size() ||
      dispatch.output.size() != c.generators.size())
    throw std::invalid_argument("dispatch does not cover every generator");
  if (z_max < 0) throw std::invalid_argument("z_max must be non-negative");

  std::vector<int> candidates;
  for (const auto& k : c.branches)
    if (k.id != contingency && k.switchable && !k.radial) candidates.push_back(k.id);
  std::sort(candidates.begin(), candidates.end());

  if (binomial_sum(candidates.size(), z_max) > static_cast<double>(kBruteForceSubsetLimit))
    throw std::length_error(fmt::format("brute-force enumeration exceeds {} subsets",
                                        kBruteForceSubsetLimit));

  const int reference = c.lowest_bus_id();
  BruteForceResult out;
  std::vector<int> best_set;
  Evaluation best, unswitched;
  bool have_best = false;

  // Subsets in size order, each size in lexicographic order, so the first
  // strictly better subset found is also the lexicographically smallest tie.
  const int max_size = std::min<int>(z_max, static_cast<int>(candidates.size()));
  for (int size = 0; size <= max_size; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
    while (true) {
      std::vector<int> removed{contingency};
      std::vector<int> opened;
      for (int i : pick) opened.push_back(candidates[static_cast<std::size_t>(i)]);
      removed.insert(removed.end(), opened.begin(), opened.end());
      const auto topo = Topology::all_except(c, removed);
      if (count_components(topo) == 1) {
        auto e = evaluate(c, dispatch, topo, reference, solver);
        ++out.subsets_evaluated;
        if (size == 0) unswitched = e;
        if (!have_best || e.loading < best.loading - 1e-9 ||
            (std::abs(e.loading - best.loading) <= 1e-9 && opened < best_set)) {
          best = std::move(e);
          best_set = opened;
          have_best = true;
        }
      } else if (size == 0) {
        throw std::invalid_argument(
            fmt::format("outage of branch {} disconnects the network", contingency));
      }

      int i = size - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] ==
                           static_cast<int>(candidates.size()) - size + i)
        --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }

  out.unswitched_loading = unswitched.loading;
  if (!best_set.empty() && best.loading < unswitched.loading - 1e-9) {
    out.opened = best_set;
    out.max_loading = best.loading;
    out.flows = std::move(best.flows);
  } else {
    out.no_improvement = true;
    out.max_loading = unswitched.loading;
    out.flows = std::move(unswitched.flows);
  }
  return out;
}

}  // namespace ctscuc
