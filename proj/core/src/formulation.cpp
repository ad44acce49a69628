#include "ctscuc/formulation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace ctscuc {

namespace names {
std::string pg(int g, int t) { return fmt::format("pg[g={},t={}]", g, t); }
std::string u(int g, int t) { return fmt::format("u[g={},t={}]", g, t); }
std::string v(int g, int t) { return fmt::format("v[g={},t={}]", g, t); }
std::string r(int g, int t) { return fmt::format("r[g={},t={}]", g, t); }
std::string pk(int k, int t) { return fmt::format("pk[k={},t={}]", k, t); }
std::string theta(int n, int t) { return fmt::format("theta[n={},t={}]", n, t); }
std::string pgc(int g, int c, int t) { return fmt::format("pgc[g={},c={},t={}]", g, c, t); }
std::string pkc(int k, int c, int t) { return fmt::format("pkc[k={},c={},t={}]", k, c, t); }
std::string thetac(int n, int c, int t) { return fmt::format("thetac[n={},c={},t={}]", n, c, t); }
std::string z(int c, int k, int t) { return fmt::format("z[c={},k={},t={}]", c, k, t); }
}  // namespace names

std::vector<std::string> validate_options(const SolveOptions& o) {
  std::vector<std::string> out;
  if (!(o.mip_gap >= 0.0 && o.mip_gap < 1.0)) out.push_back("mip_gap must lie in [0, 1)");
  if (o.z_max < 0) out.push_back("z_max must be non-negative");
  if (o.cts_enabled && o.z_max < 1) out.push_back("z_max must be at least 1 when CTS is enabled");
  if (!(o.angle_bound > 0.0)) out.push_back("angle_bound must be positive");
  if (!(o.infinite_rating_value > 0.0)) out.push_back("infinite_rating_value must be positive");
  if (o.big_m.kind == BigMPolicy::Kind::Fixed && !(o.big_m.value > 0.0))
    out.push_back("fixed big-M must be positive");
  return out;
}

int resolve_reference_bus(const Case& c, const SolveOptions& options) {
  if (!options.reference_bus) return c.lowest_bus_id();
  if (!c.has_bus(*options.reference_bus))
    throw FormulationError(fmt::format("reference bus {} is not in the case", *options.reference_bus));
  return *options.reference_bus;
}

double contingency_rating(const Branch& branch, const SolveOptions& options) {
  return options.emergency_rating_mode == EmergencyRatingMode::Infinite
             ? options.infinite_rating_value
             : branch.rating_emergency;
}

BigM compute_big_m(const Branch& branch, const SolveOptions& options, double base_mva) {
  BigM m;
  if (options.big_m.kind == BigMPolicy::Kind::Fixed) {
    m.value = options.big_m.value;
  } else {
    m.value = contingency_rating(branch, options) +
              std::abs(branch.susceptance) * base_mva * (2.0 * options.angle_bound);
    if (options.angle_bound <= 0.0)
      m.warning = fmt::format("angle_bound {} leaves big-M of branch {} equal to its rating",
                              options.angle_bound, branch.id);
  }
  if (!(m.value > 0.0))
    throw FormulationError(
        fmt::format("non-positive big-M {} for branch {}; check options", m.value, branch.id));
  return m;
}

namespace {

int var(const MilpModel& m, const std::string& name) { return m.variable_index(name); }

// Forced commitment from pre-horizon history: {periods forced, forced value}.
std::pair<int, double> forced_commitment(const Generator& g) {
  if (g.initial_on && g.initial_hours_in_state < g.min_up)
    return {g.min_up - g.initial_hours_in_state, 1.0};
  if (!g.initial_on && g.initial_hours_in_state < g.min_down)
    return {g.min_down - g.initial_hours_in_state, 0.0};
  return {0, 0.0};
}

}  // namespace

void add_base_generator_block(MilpModel& model, const Case& c, const SolveOptions& options) {
  const int T = c.horizon;
  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t) model.add_continuous(names::pg(g.id, t), 0.0, kInf);
  for (const auto& g : c.generators) {
    auto [forced, value] = forced_commitment(g);
    for (int t = 1; t <= T; ++t) {
      if (t <= forced)
        model.add_binary(names::u(g.id, t), value, value);
      else
        model.add_binary(names::u(g.id, t));
    }
  }
  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t) model.add_continuous(names::v(g.id, t), 0.0, 1.0);
  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t) model.add_continuous(names::r(g.id, t), 0.0, kInf);

  auto P = [&](const Generator& g, int t) { return var(model, names::pg(g.id, t)); };
  auto U = [&](const Generator& g, int t) { return var(model, names::u(g.id, t)); };
  auto V = [&](const Generator& g, int t) { return var(model, names::v(g.id, t)); };
  auto R = [&](const Generator& g, int t) { return var(model, names::r(g.id, t)); };
  auto row = [](std::string_view family, int g, int t) {
    return fmt::format("{}[g={},t={}]", family, g, t);
  };

  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t)
      model.add_constraint(row("gen_min", g.id, t), {{U(g, t), g.p_min}, {P(g, t), -1.0}},
                           RowSense::LessEqual, 0.0);
  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t)
      model.add_constraint(row("gen_max", g.id, t),
                           {{P(g, t), 1.0}, {R(g, t), 1.0}, {U(g, t), -g.p_max}},
                           RowSense::LessEqual, 0.0);
  for (const auto& g : c.generators)
    for (int t = 1; t <= T; ++t)
      model.add_constraint(row("reserve_cap", g.id, t), {{R(g, t), 1.0}, {U(g, t), -g.ramp_10}},
                           RowSense::LessEqual, 0.0);
  if (options.reserve_enabled) {
    // Written as sum_q r_q - P_g - r_g >= 0; r_g cancels when the row is merged.
    for (const auto& g : c.generators) {
      for (int t = 1; t <= T; ++t) {
        std::vector<Term> terms;
        for (const auto& q : c.generators) terms.push_back({R(q, t), 1.0});
        terms.push_back({P(g, t), -1.0});
        terms.push_back({R(g, t), -1.0});
        model.add_constraint(row("reserve_req", g.id, t), std::move(terms), RowSense::GreaterEqual,
                             0.0);
      }
    }
  }

  // Hourly ramping; period 0 is the pre-horizon state from the case file.
  for (const auto& g : c.generators) {
    const double u0 = g.initial_on ? 1.0 : 0.0;
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms{{P(g, t), 1.0}, {V(g, t), -g.ramp_su}};
      double rhs = 0.0;
      if (t == 1) {
        rhs = g.initial_output + g.ramp_hr * u0;
      } else {
        terms.push_back({P(g, t - 1), -1.0});
        terms.push_back({U(g, t - 1), -g.ramp_hr});
      }
      model.add_constraint(row("ramp_up", g.id, t), std::move(terms), RowSense::LessEqual, rhs);
    }
  }
  for (const auto& g : c.generators) {
    const double u0 = g.initial_on ? 1.0 : 0.0;
    for (int t = 1; t <= T; ++t) {
      // P_{t-1} - P_t - R^hr u_t - R^SD (v_t - u_t + u_{t-1}) <= 0
      std::vector<Term> terms{{P(g, t), -1.0},
                              {U(g, t), -g.ramp_hr},
                              {V(g, t), -g.ramp_sd},
                              {U(g, t), g.ramp_sd}};
      double rhs = 0.0;
      if (t == 1) {
        rhs = -g.initial_output + g.ramp_sd * u0;
      } else {
        terms.push_back({P(g, t - 1), 1.0});
        terms.push_back({U(g, t - 1), -g.ramp_sd});
      }
      model.add_constraint(row("ramp_down", g.id, t), std::move(terms), RowSense::LessEqual, rhs);
    }
  }

  for (const auto& g : c.generators) {
    for (int t = g.min_up; t <= T; ++t) {
      std::vector<Term> terms;
      for (int q = t - g.min_up + 1; q <= t; ++q) terms.push_back({V(g, q), 1.0});
      terms.push_back({U(g, t), -1.0});
      model.add_constraint(row("min_up", g.id, t), std::move(terms), RowSense::LessEqual, 0.0);
    }
  }
  for (const auto& g : c.generators) {
    for (int t = 1; t <= T - g.min_down; ++t) {
      std::vector<Term> terms;
      for (int q = t + 1; q <= t + g.min_down; ++q) terms.push_back({V(g, q), 1.0});
      terms.push_back({U(g, t), 1.0});
      model.add_constraint(row("min_down", g.id, t), std::move(terms), RowSense::LessEqual, 1.0);
    }
  }

  for (const auto& g : c.generators) {
    const double u0 = g.initial_on ? 1.0 : 0.0;
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms{{V(g, t), 1.0}, {U(g, t), -1.0}};
      double rhs = 0.0;
      if (t == 1)
        rhs = -u0;
      else
        terms.push_back({U(g, t - 1), 1.0});
      model.add_constraint(row("startup", g.id, t), std::move(terms), RowSense::GreaterEqual, rhs);
    }
  }
}

void add_objective(MilpModel& model, const Case& c) {
  for (const auto& g : c.generators) {
    for (int t = 1; t <= c.horizon; ++t) {
      auto p = model.find_variable(names::pg(g.id, t));
      auto u = model.find_variable(names::u(g.id, t));
      auto v = model.find_variable(names::v(g.id, t));
      if (!p || !u || !v)
        throw FormulationError(
            fmt::format("objective: generator {} variables for period {} not declared", g.id, t));
      model.add_objective_term(*p, g.cost_energy);
      model.add_objective_term(*u, g.cost_noload);
      model.add_objective_term(*v, g.cost_startup);
    }
  }
}

namespace {

// sum_{g in g(n)} P_g + sum_{k in delta+(n)} P_k - sum_{k in delta-(n)} P_k = d_n
std::vector<Term> balance_terms(const Case& c, int bus_id, const std::vector<int>& gen_vars,
                                const std::vector<int>& flow_vars) {
  std::vector<Term> terms;
  for (std::size_t i = 0; i < c.generators.size(); ++i)
    if (c.generators[i].bus == bus_id) terms.push_back({gen_vars[i], 1.0});
  for (std::size_t k = 0; k < c.branches.size(); ++k) {
    if (c.branches[k].to_bus == bus_id) terms.push_back({flow_vars[k], 1.0});
    if (c.branches[k].from_bus == bus_id) terms.push_back({flow_vars[k], -1.0});
  }
  return terms;
}

}  // namespace

void add_base_flow_block(MilpModel& model, const Case& c, const SolveOptions& options) {
  const int ref = resolve_reference_bus(c, options);
  const int T = c.horizon;
  const double ab = options.angle_bound;

  for (const auto& k : c.branches)
    for (int t = 1; t <= T; ++t)
      model.add_continuous(names::pk(k.id, t), -k.rating_long_term, k.rating_long_term);
  for (const auto& n : c.buses)
    for (int t = 1; t <= T; ++t) {
      if (n.id == ref)
        model.add_continuous(names::theta(n.id, t), 0.0, 0.0);
      else
        model.add_continuous(names::theta(n.id, t), -ab, ab);
    }

  for (const auto& k : c.branches) {
    const double bb = k.susceptance * c.base_mva;
    for (int t = 1; t <= T; ++t) {
      model.add_constraint(fmt::format("flow_def[k={},t={}]", k.id, t),
                           {{var(model, names::pk(k.id, t)), 1.0},
                            {var(model, names::theta(k.from_bus, t)), -bb},
                            {var(model, names::theta(k.to_bus, t)), bb}},
                           RowSense::Equal, 0.0);
    }
  }

  for (int t = 1; t <= T; ++t) {
    std::vector<int> gen_vars, flow_vars;
    for (const auto& g : c.generators) gen_vars.push_back(var(model, names::pg(g.id, t)));
    for (const auto& k : c.branches) flow_vars.push_back(var(model, names::pk(k.id, t)));
    for (std::size_t i = 0; i < c.buses.size(); ++i) {
      const int n = c.buses[i].id;
      model.add_constraint(fmt::format("balance[n={},t={}]", n, t),
                           balance_terms(c, n, gen_vars, flow_vars), RowSense::Equal,
                           c.demand_at(i, t - 1));
    }
  }
}

void add_contingency_generator_block(MilpModel& model, const Case& c,
                                     const ContingencySet& contingencies) {
  const int T = c.horizon;
  for (int cid : contingencies.members) {
    for (int t = 1; t <= T; ++t) {
      for (const auto& g : c.generators) model.add_continuous(names::pgc(g.id, cid, t), 0.0, kInf);
      for (const auto& g : c.generators) {
        const int pgc = var(model, names::pgc(g.id, cid, t));
        const int pg = var(model, names::pg(g.id, t));
        const int u = var(model, names::u(g.id, t));
        auto row = [&](std::string_view family) {
          return fmt::format("{}[g={},c={},t={}]", family, g.id, cid, t);
        };
        model.add_constraint(row("ctg_ramp_up"), {{pgc, 1.0}, {pg, -1.0}, {u, -g.ramp_10}},
                             RowSense::LessEqual, 0.0);
        model.add_constraint(row("ctg_ramp_down"), {{pg, 1.0}, {pgc, -1.0}, {u, -g.ramp_10}},
                             RowSense::LessEqual, 0.0);
        model.add_constraint(row("ctg_gen_min"), {{u, g.p_min}, {pgc, -1.0}}, RowSense::LessEqual,
                             0.0);
        model.add_constraint(row("ctg_gen_max"), {{pgc, 1.0}, {u, -g.p_max}}, RowSense::LessEqual,
                             0.0);
      }
    }
  }
}

void add_contingency_flow_block(MilpModel& model, const Case& c,
                                const ContingencySet& contingencies, const SolveOptions& options) {
  if (options.cts_enabled && options.z_max < 1)
    throw FormulationError("CTS enabled with z_max = 0");
  const int ref = resolve_reference_bus(c, options);
  const int T = c.horizon;
  const double ab = options.angle_bound;
  const double num_branches = static_cast<double>(c.branches.size());

  std::vector<double> big_m;
  for (const auto& k : c.branches) big_m.push_back(compute_big_m(k, options, c.base_mva).value);

  for (int cid : contingencies.members) {
    for (int t = 1; t <= T; ++t) {
      std::vector<int> flow_vars, z_vars, gen_vars;
      for (const auto& k : c.branches)
        flow_vars.push_back(model.add_continuous(names::pkc(k.id, cid, t), -kInf, kInf));
      for (const auto& n : c.buses) {
        if (n.id == ref)
          model.add_continuous(names::thetac(n.id, cid, t), 0.0, 0.0);
        else
          model.add_continuous(names::thetac(n.id, cid, t), -ab, ab);
      }
      for (const auto& k : c.branches) {
        double lo = 0.0, hi = 1.0;
        if (k.id == cid)
          hi = 0.0;
        else if (k.radial || !k.switchable || !options.cts_enabled)
          lo = 1.0;
        z_vars.push_back(model.add_binary(names::z(cid, k.id, t), lo, hi));
      }

      for (std::size_t i = 0; i < c.branches.size(); ++i) {
        const auto& k = c.branches[i];
        const double bb = k.susceptance * c.base_mva;
        const int th_from = var(model, names::thetac(k.from_bus, cid, t));
        const int th_to = var(model, names::thetac(k.to_bus, cid, t));
        const double m = big_m[i];
        const double limit = contingency_rating(k, options);
        auto row = [&](std::string_view family) {
          return fmt::format("{}[k={},c={},t={}]", family, k.id, cid, t);
        };
        // P - bB(th_f - th_t) + M(1 - z) >= 0   and   P - bB(th_f - th_t) - M(1 - z) <= 0
        model.add_constraint(
            row("ctg_flow_lo"),
            {{flow_vars[i], 1.0}, {th_from, -bb}, {th_to, bb}, {z_vars[i], -m}},
            RowSense::GreaterEqual, -m);
        model.add_constraint(
            row("ctg_flow_hi"),
            {{flow_vars[i], 1.0}, {th_from, -bb}, {th_to, bb}, {z_vars[i], m}},
            RowSense::LessEqual, m);
        model.add_constraint(row("ctg_limit_hi"), {{flow_vars[i], 1.0}, {z_vars[i], -limit}},
                             RowSense::LessEqual, 0.0);
        model.add_constraint(row("ctg_limit_lo"), {{flow_vars[i], 1.0}, {z_vars[i], limit}},
                             RowSense::GreaterEqual, 0.0);
      }

      // sum_k (1 - z_k) <= Z_max + 1, the outaged branch being one of the k.
      std::vector<Term> budget;
      for (int zv : z_vars) budget.push_back({zv, -1.0});
      model.add_constraint(fmt::format("switch_budget[c={},t={}]", cid, t), std::move(budget),
                           RowSense::LessEqual,
                           static_cast<double>(options.z_max) + 1.0 - num_branches);

      for (const auto& g : c.generators) gen_vars.push_back(var(model, names::pgc(g.id, cid, t)));
      for (std::size_t i = 0; i < c.buses.size(); ++i) {
        const int n = c.buses[i].id;
        model.add_constraint(fmt::format("ctg_balance[n={},c={},t={}]", n, cid, t),
                             balance_terms(c, n, gen_vars, flow_vars), RowSense::Equal,
                             c.demand_at(i, t - 1));
      }
    }
  }
}

MilpModel assemble_model(const Case& c, const ContingencySet& contingencies,
                         const SolveOptions& options) {
  if (auto problems = validate_case(c); !problems.empty())
    throw FormulationError("invalid case: " + problems.front());
  if (auto problems = validate_options(options); !problems.empty())
    throw FormulationError("invalid options: " + problems.front());
  if (!contingencies.empty() && !c.radial_flags_computed)
    throw FormulationError("radial flags must be computed before building contingencies");
  for (int cid : contingencies.members) {
    const auto& k = c.branches.at(c.branch_position(cid));
    if (k.radial) throw FormulationError(fmt::format("branch {} is radial and cannot be a contingency", cid));
  }

  MilpModel model;
  add_base_generator_block(model, c, options);
  add_base_flow_block(model, c, options);
  add_objective(model, c);
  add_contingency_generator_block(model, c, contingencies);
  add_contingency_flow_block(model, c, contingencies, options);
  return model;
}

}  // namespace ctscuc
