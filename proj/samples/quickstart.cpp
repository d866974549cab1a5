// Small tour of the library: tables, closed forms, simple metrics and transport.
#include <cstdio>

#include "l1metrics/l1metrics.hpp"

using namespace l1metrics;

int main() {
  // same marginals, two couplings: the compound metric sees the coupling, GK does not
  for (const auto& j : {fixtures::gk_a(), fixtures::gk_b()}) {
    const auto [x, y] = marginals(j);
    std::printf("E|X-Y| = %.4f   GK = %.4f   category %s\n", eabs_joint(j), gk(x, y).value, to_string(classify(j)));
  }

  const auto tri = check_triangle_dnorm(fixtures::pxpypz("ABC"));
  const auto cons = consistency_rule(fixtures::pxpypz("ABC"));
  std::printf("ABC: combination %.3f, triangle %s, smallest eigenvalue %.4f\n", tri.combination,
              tri.holds ? "holds" : "fails", cons.eigenvalues[0]);

  const auto z = UnivariateDist::gaussian(0, 1);
  const auto u = UnivariateDist::uniform(0, 2);
  std::printf("E|X-Y| N(0,1) x U(0,2): %.6f\n", eabs_product(z, u));
  const auto mc = mc_eabs({z, u}, 200000, 7);
  std::printf("  Monte Carlo: %.6f +- %.6f\n", mc.mean, mc.std_error);

  std::printf("Gini of 0/5 with P(5)=0.1: %.4f\n", gini_index(UnivariateDist::discrete({0, 5}, {0.9, 0.1})).value);

  const auto plan = optimal_plan(z, Marginal::lognormal());
  std::printf("W1(N(0,1), lognormal) = %.6f, mass of [0,1] x R = %.4f\n", plan_cost(plan, CostFn::abs()),
              plan_mass(plan, {0.0, 1.0}, Range::all()));

  const auto m = discrete_monge({0, 10}, {2, 1}, CostFn::abs());
  std::printf("sorted matching: 0->%zu 10->%zu cost %.1f\n", m.sigma[0], m.sigma[1], m.cost);
}
