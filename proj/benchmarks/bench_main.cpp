#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ctscuc/analysis.hpp"
#include "ctscuc/dc_flow.hpp"
#include "ctscuc/formulation.hpp"
#include "ctscuc/network.hpp"
#include "ctscuc/solver.hpp"
#include "ctscuc/verifier.hpp"

using namespace ctscuc;

namespace {

const Case& rts24() {
  static const Case c = load_case(std::string(CTSCUC_DATA_DIR) + "/rts24.json");
  return c;
}

std::vector<double> period_injections(const Case& c, int t) {
  std::vector<double> p(c.buses.size());
  double load = 0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    p[n] = -c.demand_at(n, t);
    load += c.demand_at(n, t);
  }
  // spread the load over generator buses in proportion to capacity
  double cap = 0;
  for (const auto& g : c.generators) cap += g.p_max;
  for (const auto& g : c.generators) p[c.bus_position(g.bus)] += load * g.p_max / cap;
  return p;
}

}  // namespace

static void BM_FindRadialBranches(benchmark::State& state) {
  const Case& c = rts24();
  for (auto _ : state) benchmark::DoNotOptimize(find_radial_branches(c));
}
BENCHMARK(BM_FindRadialBranches);

static void BM_DcFlowFullTopology(benchmark::State& state) {
  const Case& c = rts24();
  const auto topo = Topology::full(c);
  const auto p = period_injections(c, 17);
  for (auto _ : state) benchmark::DoNotOptimize(dc_flow(topo, p));
}
BENCHMARK(BM_DcFlowFullTopology);

static void BM_DcFlowEveryOutage(benchmark::State& state) {
  const Case& c = rts24();
  const auto set = build_contingency_set(c);
  const auto p = period_injections(c, 17);
  for (auto _ : state) {
    for (int k : set.members) {
      const std::vector<int> removed{k};
      benchmark::DoNotOptimize(dc_flow(Topology::all_except(c, removed), p));
    }
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(set.size()));
}
BENCHMARK(BM_DcFlowEveryOutage);

static void BM_AssembleModel(benchmark::State& state) {
  const Case c = truncate_horizon(rts24(), static_cast<int>(state.range(0)));
  const auto set = build_contingency_set(c);
  SolveOptions o;
  o.cts_enabled = true;
  for (auto _ : state) {
    auto m = assemble_model(c, set, o);
    benchmark::DoNotOptimize(m.num_variables());
  }
}
BENCHMARK(BM_AssembleModel)->Arg(1)->Arg(6)->Arg(24)->Unit(benchmark::kMillisecond);

static void BM_VerifyFixture(benchmark::State& state) {
  const Case c = load_case(std::string(CTSCUC_DATA_DIR) + "/fig123.json");
  const auto set = build_contingency_set(c);
  SolveOptions o;
  o.cts_enabled = true;
  const auto run = solve_scuc(c, set, o, *make_solver(), 0);
  if (!run.has_solution) {
    state.SkipWithError("fixture did not solve");
    return;
  }
  for (auto _ : state) benchmark::DoNotOptimize(verify_solution(c, set, o, run.solution));
}
BENCHMARK(BM_VerifyFixture)->Unit(benchmark::kMicrosecond);
BENCHMARK_MAIN();
