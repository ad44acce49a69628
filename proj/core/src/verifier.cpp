#include "ctscuc/verifier.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "ctscuc/dc_flow.hpp"

namespace ctscuc {

std::size_t VerificationReport::count(const std::string& family) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [&](const Violation& v) { return v.family == family; }));
}

namespace {

class Auditor {
 public:
  explicit Auditor(double tol) : tol_(tol) {}

  // residual > 0 means the constraint is violated by that amount
  void check(const std::string& family, double residual, const std::string& indices) {
    auto& worst = report_.max_residual[family];
    worst = std::max(worst, residual);
    if (residual > tol_) report_.violations.push_back({family, indices, residual});
  }
  void le(const std::string& family, double lhs, double rhs, const std::string& indices) {
    check(family, lhs - rhs, indices);
  }
  void eq(const std::string& family, double lhs, double rhs, const std::string& indices) {
    check(family, std::abs(lhs - rhs), indices);
  }
  // Binaries use the integrality tolerance rather than the MW tolerance.
  void binary(const std::string& family, double value, const std::string& indices) {
    const double rounded = std::round(value);
    double residual = std::abs(value - rounded);
    if (rounded != 0.0 && rounded != 1.0) residual = std::max(residual, 1.0);
    auto& worst = report_.max_residual[family];
    worst = std::max(worst, residual);
    if (residual > kIntegralityTolerance) report_.violations.push_back({family, indices, residual});
  }

  VerificationReport take() { return std::move(report_); }

 private:
  double tol_;
  VerificationReport report_;
};

std::string gt(int g, int t) { return fmt::format("g={},t={}", g, t + 1); }

}  // namespace

VerificationReport verify_solution(const Case& c, const ContingencySet& contingencies,
                                   const SolveOptions& options, const Solution& s,
                                   double tolerance) {
  Auditor a(tolerance);
  const int T = c.horizon;
  const std::size_t G = c.generators.size();
  const std::size_t K = c.branches.size();
  const std::size_t N = c.buses.size();
  const int ref = resolve_reference_bus(c, options);
  const std::size_t ref_pos = c.bus_position(ref);

  // --- base-case generation
  double cost = 0.0;
  for (std::size_t gi = 0; gi < G; ++gi) {
    const auto& g = c.generators[gi];
    const double u0 = g.initial_on ? 1.0 : 0.0;
    int forced = 0;
    double forced_value = 0.0;
    if (g.initial_on && g.initial_hours_in_state < g.min_up) {
      forced = g.min_up - g.initial_hours_in_state;
      forced_value = 1.0;
    } else if (!g.initial_on && g.initial_hours_in_state < g.min_down) {
      forced = g.min_down - g.initial_hours_in_state;
    }
    for (int t = 0; t < T; ++t) {
      const auto idx = gt(g.id, t);
      const double P = s.pg(gi, t), u = s.u(gi, t), v = s.v(gi, t), r = s.r(gi, t);
      const double P_prev = t == 0 ? g.initial_output : s.pg(gi, t - 1);
      const double u_prev = t == 0 ? u0 : s.u(gi, t - 1);
      cost += g.cost_energy * P + g.cost_noload * u + g.cost_startup * v;

      a.binary("integrality", u, "u:" + idx);
      a.check("bounds", std::max({-P, -r, -v, v - 1.0}), idx);
      if (t < forced) a.eq("initial_state", u, forced_value, idx);
      a.le("gen_min", g.p_min * u, P, idx);
      a.le("gen_max", P + r, g.p_max * u, idx);
      a.le("reserve_cap", r, g.ramp_10 * u, idx);
      if (options.reserve_enabled) {
        double total_r = 0.0;
        for (std::size_t q = 0; q < G; ++q) total_r += s.r(q, t);
        a.le("reserve_req", P + r, total_r, idx);
      }
      a.le("ramp_up", P - P_prev, g.ramp_hr * u_prev + g.ramp_su * v, idx);
      a.le("ramp_down", P_prev - P, g.ramp_hr * u + g.ramp_sd * (v - u + u_prev), idx);
      a.le("startup", u - u_prev, v, idx);
      if (t + 1 >= g.min_up) {
        double sum = 0.0;
        for (int q = t - g.min_up + 1; q <= t; ++q) sum += s.v(gi, q);
        a.le("min_up", sum, u, idx);
      }
      if (t + 1 <= T - g.min_down) {
        double sum = 0.0;
        for (int q = t + 1; q <= t + g.min_down; ++q) sum += s.v(gi, q);
        a.le("min_down", sum, 1.0 - u, idx);
      }
    }
  }
  a.eq("objective", cost, s.objective, "total");

  // --- base-case network
  for (int t = 0; t < T; ++t) {
    std::vector<double> balance(N, 0.0);
    for (std::size_t gi = 0; gi < G; ++gi)
      balance[c.bus_position(c.generators[gi].bus)] += s.pg(gi, t);
    for (std::size_t ki = 0; ki < K; ++ki) {
      const auto& k = c.branches[ki];
      const auto f = c.bus_position(k.from_bus), to = c.bus_position(k.to_bus);
      const auto idx = fmt::format("k={},t={}", k.id, t + 1);
      const double P = s.pk(ki, t);
      a.eq("flow_def", P, k.susceptance * c.base_mva * (s.theta(f, t) - s.theta(to, t)), idx);
      a.le("flow_limit", std::abs(P), k.rating_long_term, idx);
      balance[to] += P;
      balance[f] -= P;
    }
    for (std::size_t n = 0; n < N; ++n) {
      const auto idx = fmt::format("n={},t={}", c.buses[n].id, t + 1);
      a.eq("balance", balance[n], c.demand_at(n, t), idx);
      a.le("angle_limit", std::abs(s.theta(n, t)), n == ref_pos ? 0.0 : options.angle_bound, idx);
    }
  }

  // --- post-contingency
  for (std::size_t ci = 0; ci < contingencies.size(); ++ci) {
    const int cid = contingencies.members[ci];
    for (int t = 0; t < T; ++t) {
      std::vector<double> injection(N, 0.0);
      for (std::size_t gi = 0; gi < G; ++gi) {
        const auto& g = c.generators[gi];
        const auto idx = fmt::format("g={},c={},t={}", g.id, cid, t + 1);
        const double Pc = s.pgc(ci, gi, t), P = s.pg(gi, t), u = s.u(gi, t);
        a.le("ctg_ramp_up", Pc - P, g.ramp_10 * u, idx);
        a.le("ctg_ramp_down", P - Pc, g.ramp_10 * u, idx);
        a.le("ctg_gen_min", g.p_min * u, Pc, idx);
        a.le("ctg_gen_max", Pc, g.p_max * u, idx);
        injection[c.bus_position(g.bus)] += Pc;
      }

      std::vector<double> balance = injection;
      std::vector<int> opened;
      double open_count = 0.0;
      for (std::size_t ki = 0; ki < K; ++ki) {
        const auto& k = c.branches[ki];
        const auto f = c.bus_position(k.from_bus), to = c.bus_position(k.to_bus);
        const auto idx = fmt::format("k={},c={},t={}", k.id, cid, t + 1);
        const double P = s.pkc(ci, ki, t), z = s.z(ci, ki, t);
        a.binary("integrality", z, "z:" + idx);
        const double zr = std::round(z);

        if (k.id == cid)
          a.eq("switch_status", zr, 0.0, idx);
        else if (k.radial || !k.switchable || !options.cts_enabled)
          a.eq("switch_status", zr, 1.0, idx);

        const double mismatch =
            std::abs(P - k.susceptance * c.base_mva * (s.thetac(ci, f, t) - s.thetac(ci, to, t)));
        const double big_m = compute_big_m(k, options, c.base_mva).value;
        a.le("ctg_flow_def", mismatch, (1.0 - zr) * big_m, idx);
        a.le("ctg_limit", std::abs(P), zr * contingency_rating(k, options), idx);

        open_count += 1.0 - zr;
        if (zr == 0.0) opened.push_back(k.id);
        balance[to] += P;
        balance[f] -= P;
      }
      a.le("switch_budget", open_count, options.z_max + 1.0, fmt::format("c={},t={}", cid, t + 1));

      bool balanced = true;
      for (std::size_t n = 0; n < N; ++n) {
        const auto idx = fmt::format("n={},c={},t={}", c.buses[n].id, cid, t + 1);
        const double residual = std::abs(balance[n] - c.demand_at(n, t));
        balanced = balanced && residual <= tolerance;
        a.check("ctg_balance", residual, idx);
        const double bound = n == ref_pos ? 0.0 : options.angle_bound;
        a.le("angle_limit", std::abs(s.thetac(ci, n, t)), bound, idx);
      }

      // Independent flow check on the topology the switching decisions imply.
      if (!balanced) continue;
      for (std::size_t n = 0; n < N; ++n) injection[n] -= c.demand_at(n, t);
      const auto topo = Topology::all_except(c, opened);
      const auto cidx = fmt::format("c={},t={}", cid, t + 1);
      try {
        const auto flow = dc_flow(topo, injection, ref, tolerance * static_cast<double>(N));
        for (std::size_t ki = 0; ki < K; ++ki) {
          a.eq("dc_flow", s.pkc(ci, ki, t), flow.flows[ki],
               fmt::format("k={},{}", c.branches[ki].id, cidx));
        }
      } catch (const FlowError& e) {
        a.check("dc_flow", kInf, cidx + " (" + e.what() + ")");
      }
    }
  }
  return a.take();
}

}  // namespace ctscuc
