#include "ctscuc/solution.hpp"

#include "ctscuc/formulation.hpp"

namespace ctscuc {

Solution extract_solution(const Case& c, const ContingencySet& contingencies,
                          const SolveResult& result) {
  const std::size_t G = c.generators.size();
  const std::size_t K = c.branches.size();
  const std::size_t N = c.buses.size();
  const std::size_t C = contingencies.size();
  const auto T = static_cast<std::size_t>(c.horizon);

  Solution s;
  s.status = result.status;
  s.objective = result.objective_value;
  s.best_bound = result.best_bound;
  s.gap = result.gap;
  s.pg = s.u = s.v = s.r = Grid<2>({G, T});
  s.pk = Grid<2>({K, T});
  s.theta = Grid<2>({N, T});
  s.pgc = Grid<3>({C, G, T});
  s.pkc = s.z = Grid<3>({C, K, T});
  s.thetac = Grid<3>({C, N, T});

  for (std::size_t t = 0; t < T; ++t) {
    const int tt = static_cast<int>(t) + 1;
    for (std::size_t g = 0; g < G; ++g) {
      const int id = c.generators[g].id;
      s.pg(g, t) = result.value(names::pg(id, tt));
      s.u(g, t) = result.value(names::u(id, tt));
      s.v(g, t) = result.value(names::v(id, tt));
      s.r(g, t) = result.value(names::r(id, tt));
    }
    for (std::size_t k = 0; k < K; ++k) s.pk(k, t) = result.value(names::pk(c.branches[k].id, tt));
    for (std::size_t n = 0; n < N; ++n) s.theta(n, t) = result.value(names::theta(c.buses[n].id, tt));
    for (std::size_t ci = 0; ci < C; ++ci) {
      const int cid = contingencies.members[ci];
      for (std::size_t g = 0; g < G; ++g)
        s.pgc(ci, g, t) = result.value(names::pgc(c.generators[g].id, cid, tt));
      for (std::size_t k = 0; k < K; ++k) {
        s.pkc(ci, k, t) = result.value(names::pkc(c.branches[k].id, cid, tt));
        s.z(ci, k, t) = result.value(names::z(cid, c.branches[k].id, tt));
      }
      for (std::size_t n = 0; n < N; ++n)
        s.thetac(ci, n, t) = result.value(names::thetac(c.buses[n].id, cid, tt));
    }
  }
  return s;
}

}  // namespace ctscuc
