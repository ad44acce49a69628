#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ctscuc/analysis.hpp"
#include "ctscuc/formulation.hpp"
#include "ctscuc/solver.hpp"
#include "support.hpp"

using namespace ctscuc;
using ctscuc::testing::data_path;
using ctscuc::testing::make_generator;

namespace {

SolveOptions no_reserve() {
  SolveOptions o;
  o.reserve_enabled = false;
  o.mip_gap = 0.0;
  return o;
}

double coefficient(const MilpModel& m, const std::string& row, const std::string& var) {
  const auto& con = m.constraints().at(static_cast<std::size_t>(*m.find_constraint(row)));
  const int v = m.variable_index(var);
  for (const auto& t : con.terms)
    if (t.var == v) return t.coef;
  return 0.0;
}

bool references(const MilpModel& m, const std::string& row, const std::string& var) {
  const auto& con = m.constraints().at(static_cast<std::size_t>(*m.find_constraint(row)));
  const int v = m.variable_index(var);
  return std::any_of(con.terms.begin(), con.terms.end(), [&](const Term& t) { return t.var == v; });
}

// Two buses, one line b=10 pu, generator at bus 1 and `load` MW at bus 2.
Case two_bus(double load) {
  Case c = ctscuc::testing::network_case(2, {{1, 2}});
  c.generators.push_back(make_generator(1, 1, 0, 500, 10, 0, 0));
  c.demand = {{0.0, load}};
  return c;
}

}  // namespace

TEST(Objective, SingleGeneratorCoefficients) {
  Case c = ctscuc::testing::single_unit_case(50);
  MilpModel m;
  add_base_generator_block(m, c);
  add_objective(m, c);
  ASSERT_EQ(m.objective().size(), 3u);
  std::vector<double> coefs;
  for (const auto& t : m.objective()) coefs.push_back(t.coef);
  EXPECT_EQ(coefs, (std::vector<double>{10, 5, 100}));
  EXPECT_EQ(m.objective()[0].var, m.variable_index(names::pg(1, 1)));
  EXPECT_EQ(m.objective()[1].var, m.variable_index(names::u(1, 1)));
  EXPECT_EQ(m.objective()[2].var, m.variable_index(names::v(1, 1)));
}

TEST(Objective, NoGenerators) {
  Case c = ctscuc::testing::triangle_case();
  MilpModel m;
  add_objective(m, c);
  EXPECT_TRUE(m.objective().empty());
  EXPECT_EQ(m.evaluate_objective({}), 0.0);
}

TEST(Objective, MissingVariablesThrow) {
  Case c = ctscuc::testing::single_unit_case(50);
  MilpModel m;
  EXPECT_THROW(add_objective(m, c), FormulationError);
}

TEST(Objective, Rts24TermCount) {
  const Case c = load_case(data_path("rts24.json"));
  ASSERT_EQ(c.horizon, 24);
  MilpModel m;
  add_base_generator_block(m, c);
  add_objective(m, c);
  EXPECT_EQ(m.objective().size(), 3 * c.generators.size() * 24);
  EXPECT_EQ(m.objective().size(), 2232u);
}

TEST(GeneratorBlock, RowCountsOneUnitTwoPeriods) {
  Case c = ctscuc::testing::single_unit_case(0);
  c.horizon = 2;
  c.demand = {{0}, {0}};
  MilpModel m;
  add_base_generator_block(m, c);
  EXPECT_EQ(m.count_family("gen_min"), 2u);
  EXPECT_EQ(m.count_family("gen_max"), 2u);
  EXPECT_EQ(m.count_family("reserve_cap"), 2u);
  EXPECT_EQ(m.count_family("reserve_req"), 2u);
  EXPECT_EQ(m.count_family("ramp_up"), 2u);
  EXPECT_EQ(m.count_family("ramp_down"), 2u);
  EXPECT_EQ(m.count_family("min_up"), 2u);
  EXPECT_EQ(m.count_family("min_down"), 1u);
  EXPECT_EQ(m.count_family("startup"), 2u);
  EXPECT_EQ(m.num_constraints(), 17u);
  EXPECT_EQ(m.num_binaries(), 2u);

  const auto& v = m.variable(m.variable_index(names::v(1, 1)));
  EXPECT_EQ(v.kind, VarKind::Continuous);
  EXPECT_EQ(v.lower, 0.0);
  EXPECT_EQ(v.upper, 1.0);
}

TEST(GeneratorBlock, ReserveRowIsWrittenAsPrinted) {
  Case c = ctscuc::testing::single_unit_case(0);
  c.generators.push_back(make_generator(2, 1, 0, 100, 20, 0, 0));
  MilpModel m;
  add_base_generator_block(m, c);
  const std::string row = "reserve_req[g=1,t=1]";
  // r_1 + r_2 >= P_1 + r_1 leaves r_2 >= P_1.
  EXPECT_EQ(coefficient(m, row, names::r(2, 1)), 1.0);
  EXPECT_EQ(coefficient(m, row, names::pg(1, 1)), -1.0);
  EXPECT_FALSE(references(m, row, names::r(1, 1)));
  EXPECT_FALSE(references(m, row, names::pg(2, 1)));
}

TEST(GeneratorBlock, ReserveRowsCanBeSwitchedOff) {
  Case c = ctscuc::testing::single_unit_case(0);
  MilpModel m;
  add_base_generator_block(m, c, no_reserve());
  EXPECT_EQ(m.count_family("reserve_req"), 0u);
}

TEST(GeneratorBlock, FixedOutputUnitIsAllOrNothing) {
  Case c = ctscuc::testing::single_unit_case(0);
  c.generators[0].p_min = c.generators[0].p_max = 50;
  c.horizon = 3;
  c.demand = {{0}, {50}, {0}};
  const auto run = solve_scuc(c, {}, no_reserve(), *make_solver(), 0);
  ASSERT_TRUE(run.has_solution);
  for (int t = 0; t < 3; ++t) {
    const double p = run.solution.pg(0, t), u = run.solution.u(0, t);
    EXPECT_TRUE(std::abs(p) < 1e-6 || std::abs(p - 50.0 * u) < 1e-6) << "t=" << t;
  }
  EXPECT_NEAR(run.solution.pg(0, 1), 50.0, 1e-6);
}

TEST(GeneratorBlock, HistoryForcesCommitment) {
  Case c = ctscuc::testing::single_unit_case(0);
  auto& g = c.generators[0];
  g.min_up = 3;
  g.initial_on = true;
  g.initial_output = 20;
  g.initial_hours_in_state = 1;
  c.horizon = 4;
  c.demand.assign(4, {0});
  MilpModel m;
  add_base_generator_block(m, c);
  for (int t = 1; t <= 2; ++t) EXPECT_EQ(m.variable(m.variable_index(names::u(1, t))).lower, 1.0);
  EXPECT_EQ(m.variable(m.variable_index(names::u(1, 3))).lower, 0.0);
}

TEST(FlowBlock, TwoBusSinglePath) {
  Case c = two_bus(100);
  const auto run = solve_scuc(c, {}, no_reserve(), *make_solver(), 0);
  ASSERT_TRUE(run.has_solution);
  EXPECT_NEAR(run.solution.pk(0, 0), 100.0, 1e-6);
  EXPECT_NEAR(run.solution.theta(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(run.solution.theta(1, 0), -0.1, 1e-8);
}

TEST(FlowBlock, TriangleSplitsByImpedance) {
  // Branches: 1 = 1-2, 2 = 2-3, 3 = 1-3, equal susceptance.
  Case c = ctscuc::testing::triangle_case();
  c.generators.push_back(make_generator(1, 1, 0, 500, 10, 0, 0));
  c.demand = {{0, 0, 90}};

  // Oracle: reduced 2x2 system on buses 2 and 3 with bus 1 as slack, by Cramer's rule.
  const double bb = 10.0 * 100.0;
  const double a11 = 2 * bb, a12 = -bb, a21 = -bb, a22 = 2 * bb;
  const double p2 = 0.0, p3 = -90.0;
  const double det = a11 * a22 - a12 * a21;
  const double th2 = (p2 * a22 - a12 * p3) / det, th3 = (a11 * p3 - a21 * p2) / det;
  const double direct = bb * (0.0 - th3), around = bb * (0.0 - th2);
  ASSERT_NEAR(direct, 60.0, 1e-9);
  ASSERT_NEAR(around, 30.0, 1e-9);

  const auto run = solve_scuc(c, {}, no_reserve(), *make_solver(), 0);
  ASSERT_TRUE(run.has_solution);
  EXPECT_NEAR(run.solution.pk(2, 0), 60.0, 1e-6);
  EXPECT_NEAR(run.solution.pk(0, 0), 30.0, 1e-6);
  EXPECT_NEAR(run.solution.pk(1, 0), 30.0, 1e-6);
}

TEST(FlowBlock, LongTermRatingBoundsFlowVariable) {
  Case c = two_bus(100);
  c.branches[0].rating_long_term = 157.5;
  c.branches[0].rating_emergency = 180;
  MilpModel m;
  add_base_generator_block(m, c);
  add_base_flow_block(m, c);
  const auto& pk = m.variable(m.variable_index(names::pk(1, 1)));
  EXPECT_EQ(pk.lower, -157.5);
  EXPECT_EQ(pk.upper, 157.5);
  const auto& ref = m.variable(m.variable_index(names::theta(1, 1)));
  EXPECT_EQ(ref.lower, 0.0);
  EXPECT_EQ(ref.upper, 0.0);
  const auto& other = m.variable(m.variable_index(names::theta(2, 1)));
  EXPECT_EQ(other.upper, 0.6);
}

TEST(FlowBlock, UnknownReferenceBus) {
  Case c = two_bus(100);
  SolveOptions o;
  o.reference_bus = 7;
  MilpModel m;
  add_base_generator_block(m, c);
  EXPECT_THROW(add_base_flow_block(m, c, o), FormulationError);
}

TEST(ContingencyGeneratorBlock, CountsAndCollapse) {
  Case c = ctscuc::testing::triangle_case();
  c.generators.push_back(make_generator(1, 1, 0, 100, 10, 0, 0));
  c.generators.push_back(make_generator(2, 2, 0, 100, 20, 0, 0));
  c.horizon = 2;
  c.demand.assign(2, {0, 0, 0});
  mark_radial_branches(c);
  const auto set = build_contingency_set(c);
  ASSERT_EQ(set.size(), 3u);

  MilpModel m;
  add_base_generator_block(m, c);
  const auto before_vars = m.num_variables(), before_rows = m.num_constraints();
  add_contingency_generator_block(m, c, set);
  EXPECT_EQ(m.num_variables() - before_vars, 12u);
  EXPECT_EQ(m.num_constraints() - before_rows, 12u * 4u);

  // With R10 = 0 both ramp rows bound pgc - pg by zero.
  c.generators[0].ramp_10 = 0;
  MilpModel z;
  add_base_generator_block(z, c);
  add_contingency_generator_block(z, c, set);
  EXPECT_EQ(coefficient(z, "ctg_ramp_up[g=1,c=1,t=1]", names::u(1, 1)), 0.0);
  EXPECT_EQ(coefficient(z, "ctg_ramp_up[g=1,c=1,t=1]", names::pg(1, 1)), -1.0);
}

TEST(ContingencyGeneratorBlock, OfflineUnitProducesNothing) {
  Case c = ctscuc::testing::triangle_case();
  c.generators.push_back(make_generator(1, 1, 0, 300, 10, 0, 0));
  c.generators.push_back(make_generator(2, 2, 0, 300, 90, 500, 0));
  c.demand = {{0, 0, 90}};
  mark_radial_branches(c);
  const auto set = build_contingency_set(c);
  const auto run = solve_scuc(c, set, no_reserve(), *make_solver(), 0);
  ASSERT_TRUE(run.has_solution);
  ASSERT_EQ(run.solution.u(1, 0), 0.0);
  for (std::size_t ci = 0; ci < set.size(); ++ci) EXPECT_EQ(run.solution.pgc(ci, 1, 0), 0.0);
}

TEST(ContingencyFlowBlock, SwitchStatusBounds) {
  Case c = ctscuc::testing::network_case(4, {{1, 2}, {2, 3}, {1, 3}, {3, 4}});
  mark_radial_branches(c);  // branch 4 is radial
  c.branches[1].switchable = false;
  const auto set = build_contingency_set(c);
  ASSERT_EQ(set.members, (std::vector<int>{1, 2, 3}));

  SolveOptions on;
  on.cts_enabled = true;
  MilpModel m;
  add_base_generator_block(m, c);
  add_base_flow_block(m, c);
  add_contingency_generator_block(m, c, set);
  add_contingency_flow_block(m, c, set, on);
  auto bounds = [&](int cid, int k) {
    const auto& v = m.variable(m.variable_index(names::z(cid, k, 1)));
    return std::pair{v.lower, v.upper};
  };
  EXPECT_EQ(bounds(1, 1), (std::pair{0.0, 0.0}));  // outaged
  EXPECT_EQ(bounds(1, 2), (std::pair{1.0, 1.0}));  // not switchable
  EXPECT_EQ(bounds(1, 3), (std::pair{0.0, 1.0}));
  EXPECT_EQ(bounds(1, 4), (std::pair{1.0, 1.0}));  // radial
  EXPECT_EQ(bounds(3, 1), (std::pair{0.0, 1.0}));

  SolveOptions off;
  MilpModel n;
  add_base_generator_block(n, c);
  add_base_flow_block(n, c);
  add_contingency_generator_block(n, c, set);
  add_contingency_flow_block(n, c, set, off);
  EXPECT_EQ(n.variable(n.variable_index(names::z(3, 1, 1))).lower, 1.0);
  EXPECT_EQ(n.variable(n.variable_index(names::z(3, 3, 1))).upper, 0.0);
}

TEST(ContingencyFlowBlock, BudgetCountsOutagePlusVoluntaryOpenings) {
  Case c = ctscuc::testing::triangle_case();
  mark_radial_branches(c);
  const auto set = build_contingency_set(c);
  SolveOptions o;
  o.cts_enabled = true;
  o.z_max = 2;
  const auto m = assemble_model(c, set, o);
  const auto& row = m.constraints().at(static_cast<std::size_t>(*m.find_constraint("switch_budget[c=1,t=1]")));
  // sum(1 - z) <= 3  <=>  -sum z <= 3 - 3
  EXPECT_EQ(row.terms.size(), 3u);
  EXPECT_EQ(row.sense, RowSense::LessEqual);
  EXPECT_EQ(row.rhs, 0.0);
}

TEST(ContingencyFlowBlock, CtsWithZeroBudgetIsRejected) {
  Case c = ctscuc::testing::triangle_case();
  mark_radial_branches(c);
  SolveOptions o;
  o.cts_enabled = true;
  o.z_max = 0;
  MilpModel m;
  add_base_generator_block(m, c);
  add_base_flow_block(m, c);
  EXPECT_THROW(add_contingency_flow_block(m, c, build_contingency_set(c), o), FormulationError);
}

TEST(ContingencyFlowBlock, OpenLineCarriesNothing) {
  // Outage of the direct line leaves the two-hop path; its flow is zero.
  Case c = ctscuc::testing::triangle_case();
  c.generators.push_back(make_generator(1, 1, 0, 500, 10, 0, 0));
  c.demand = {{0, 0, 90}};
  mark_radial_branches(c);
  const auto set = build_contingency_set(c);
  const auto run = solve_scuc(c, set, no_reserve(), *make_solver(), 0);
  ASSERT_TRUE(run.has_solution);
  const auto ci = static_cast<std::size_t>(
      std::find(set.members.begin(), set.members.end(), 3) - set.members.begin());
  EXPECT_EQ(run.solution.z(ci, 2, 0), 0.0);
  EXPECT_NEAR(run.solution.pkc(ci, 2, 0), 0.0, 1e-9);
  EXPECT_NEAR(run.solution.pkc(ci, 0, 0), 90.0, 1e-6);
  EXPECT_NEAR(run.solution.pkc(ci, 1, 0), 90.0, 1e-6);
}

TEST(BigM, PerLine) {
  Branch k;
  k.id = 1;
  k.susceptance = 10;
  k.rating_long_term = 157.5;
  k.rating_emergency = 180;
  SolveOptions o;
  const auto m = compute_big_m(k, o, 100);
  EXPECT_DOUBLE_EQ(m.value, 180 + 10 * 100 * (2 * 0.6));
  EXPECT_DOUBLE_EQ(m.value, 1380.0);
  EXPECT_FALSE(m.warning);

  o.emergency_rating_mode = EmergencyRatingMode::Infinite;
  EXPECT_DOUBLE_EQ(compute_big_m(k, o, 100).value, 1e4 + 1200.0);
}

TEST(BigM, FixedAndDegenerate) {
  Branch k;
  k.susceptance = -25;
  k.rating_emergency = 300;
  SolveOptions o;
  o.big_m = BigMPolicy::fixed(1e5);
  EXPECT_EQ(compute_big_m(k, o).value, 1e5);

  SolveOptions flat;
  flat.angle_bound = 0.0;
  const auto m = compute_big_m(k, flat);
  EXPECT_EQ(m.value, 300.0);
  EXPECT_TRUE(m.warning);

  SolveOptions bad;
  bad.big_m = BigMPolicy::fixed(0);
  EXPECT_THROW(compute_big_m(k, bad), FormulationError);
}

TEST(Assemble, Deterministic) {
  Case c = load_case(data_path("fig123.json"));
  const auto set = build_contingency_set(c);
  SolveOptions o;
  o.cts_enabled = true;
  const auto a = assemble_model(c, set, o), b = assemble_model(c, set, o);
  EXPECT_EQ(a.to_lp(), b.to_lp());
  ASSERT_EQ(a.num_variables(), b.num_variables());
  for (std::size_t i = 0; i < a.num_variables(); ++i)
    EXPECT_EQ(a.variables()[i].name, b.variables()[i].name);
}

TEST(Assemble, CtsToggleOnlyChangesSwitchBounds) {
  Case c = load_case(data_path("fig123.json"));
  const auto set = build_contingency_set(c);
  SolveOptions off, on;
  on.cts_enabled = true;
  const auto a = assemble_model(c, set, off), b = assemble_model(c, set, on);
  ASSERT_EQ(a.num_variables(), b.num_variables());
  ASSERT_EQ(a.num_constraints(), b.num_constraints());
  std::size_t differing = 0;
  for (std::size_t i = 0; i < a.num_variables(); ++i) {
    const auto& x = a.variables()[i];
    const auto& y = b.variables()[i];
    ASSERT_EQ(x.name, y.name);
    if (x.lower != y.lower || x.upper != y.upper) {
      EXPECT_EQ(name_family(x.name), "z");
      ++differing;
    }
  }
  EXPECT_GT(differing, 0u);
  for (std::size_t i = 0; i < a.num_constraints(); ++i) {
    EXPECT_EQ(a.constraints()[i].name, b.constraints()[i].name);
    EXPECT_EQ(a.constraints()[i].rhs, b.constraints()[i].rhs);
  }
}

TEST(Assemble, Rts24VariableCount) {
  const Case c = load_case(data_path("rts24.json"));
  const auto set = build_contingency_set(c);
  const std::size_t G = c.generators.size(), K = c.branches.size(), N = c.buses.size();
  const std::size_t T = 24, C = set.size();
  const std::size_t expected = T * (4 * G + K + N) + C * T * (G + 2 * K + N);
  SolveOptions o;
  o.cts_enabled = true;
  const auto m = assemble_model(c, set, o);
  EXPECT_EQ(m.num_variables(), expected);
  EXPECT_EQ(m.num_variables(), 120792u);
  EXPECT_EQ(m.num_binaries(), G * T + C * K * T);
}

TEST(Assemble, ContingenciesFollowBaseBlocksInOrder) {
  Case c = load_case(data_path("fig123.json"));
  const auto set = build_contingency_set(c);
  const auto m = assemble_model(c, set, {});
  int last_c = -1, last_t = -1;
  bool in_contingency = false;
  for (const auto& v : m.variables()) {
    if (v.name.rfind("pgc[", 0) != 0) {
      if (in_contingency) EXPECT_NE(v.name.rfind("pg[", 0), 0u) << v.name;
      continue;
    }
    in_contingency = true;
    int g = 0, cid = 0, t = 0;
    ASSERT_EQ(std::sscanf(v.name.c_str(), "pgc[g=%d,c=%d,t=%d]", &g, &cid, &t), 3);
    EXPECT_TRUE(cid > last_c || (cid == last_c && t >= last_t)) << v.name;
    last_c = cid;
    last_t = t;
  }
}

TEST(Assemble, RejectsBadInput) {
  Case c = load_case(data_path("fig123.json"));
  const auto set = build_contingency_set(c);
  SolveOptions o;
  o.mip_gap = 1.5;
  EXPECT_THROW(assemble_model(c, set, o), FormulationError);

  ContingencySet radial{{6}};
  EXPECT_THROW(assemble_model(c, radial, {}), FormulationError);
}
