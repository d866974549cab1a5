// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "l1metrics/l1metrics.hpp"
#include "support/generators.hpp"

using namespace l1metrics;
using l1test::Family;

namespace {

class Criterion {
 public:
  explicit Criterion(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void check(bool ok, const std::string& what) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }
  void close(double tol, double got, double want, const std::string& what) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: got %.17g, want %.17g (tol %.1e)", what.c_str(), got, want, tol);
    check(std::abs(got - want) <= tol, buf);
  }
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }
  void time_limit(double limit) {
    const double s = seconds();
    char buf[128];
    std::snprintf(buf, sizeof buf, "runtime %.2fs exceeds %.0fs", s, limit);
    check(s < limit, buf);
  }
  bool report() const {
    const bool ok = failures_.empty();
    std::printf("%s %s (%zu checks, %.2fs)\n", ok ? "PASS" : "FAIL", name_.c_str(), checks_, seconds());
    for (std::size_t i = 0; i < failures_.size() && i < 10; ++i) std::printf("    %s\n", failures_[i].c_str());
    if (failures_.size() > 10) std::printf("    ... %zu more\n", failures_.size() - 10);
    std::fflush(stdout);
    return ok;
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
};

bool ac1_tables() {
  Criterion c("AC1 reference-table fixtures");
  const double tol = 1e-12;
  c.close(tol, eabs_joint(fixtures::gk_a()), 0.7, "E|X-Y| table 1(a)");
  c.close(tol, eabs_joint(fixtures::gk_b()), 0.62, "E|X-Y| table 1(b)");
  const double mm[] = {0.25, 0.50, 0.75};
  const double ent[] = {1.040, 1.255, 1.040};
  for (int k = 0; k < 3; ++k) {
    const auto j = fixtures::minmax(static_cast<char>('a' + k));
    const std::string tag = std::string("minmax ") + static_cast<char>('a' + k);
    c.close(tol, eabs_joint(j), mm[k], "E|X-Y| " + tag);
    const auto [x, y] = marginals(j);
    c.close(tol, gk(x, y).value, 0.25, "GK " + tag);
    c.close(5e-4, entropy(j), ent[k], "entropy " + tag);
  }
  for (const auto& j : {fixtures::gk_a(), fixtures::gk_b()}) {
    const auto [x, y] = marginals(j);
    c.close(tol, gk(x, y).value, 0.5, "GK table 1");
  }
  c.time_limit(1.0);
  return c.report();
}

bool ac2_triangle() {
  Criterion c("AC2 triangle counterexamples and consistency rule");
  const double tol = 1e-12;
  const auto abc = fixtures::pxpypz("ABC");
  c.close(tol, mean_abs(abc.x()), 1.0, "E|X| ABC");
  c.close(tol, mean_abs(abc.y()), 1.0, "E|Y| ABC");
  c.close(tol, mean_abs(abc.z()), 1.0, "E|Z| ABC");
  const auto rabc = check_triangle_dnorm(abc);
  c.close(tol, rabc.combination, -0.02, "combination ABC");
  c.check(!rabc.holds, "ABC must violate the triangle inequality");
  const auto rghi = check_triangle_dnorm(fixtures::pxpypz("GHI"));
  c.close(tol, rghi.combination, 0.5, "combination GHI");
  c.check(rghi.holds, "GHI must satisfy the triangle inequality");

  const struct {
    const char* group;
    double ev[3];
    bool consistent;
  } want[] = {{"ABC", {0.072, 0.44, 2.128}, true}, {"DEF", {-0.076, 1.093, 1.623}, false}, {"GHI", {0.84, 0.84, 0.96}, true}};
  for (const auto& w : want) {
    const auto r = consistency_rule(fixtures::pxpypz(w.group));
    for (int k = 0; k < 3; ++k) c.close(1e-3, r.eigenvalues[k], w.ev[k], std::string("eigenvalue ") + w.group);
    c.check(r.consistent == w.consistent, std::string("consistency flag ") + w.group);
  }
  const auto v = consistency_rule(fixtures::pxpypz("GHI")).cov_matrix;
  const double diag[3] = {0.96, 0.84, 0.84};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c.close(1e-3, v[i][j], i == j ? diag[i] : 0.0, "GHI covariance entry");
  return c.report();
}

bool ac3_gaussian() {
  Criterion c("AC3 Gaussian closed forms");
  const double two_over_sqrt_pi = 2.0 / std::sqrt(std::numbers::pi);
  c.close(1e-12, gaussian_eabs(0, 1, 0, 1), two_over_sqrt_pi, "gaussian_eabs(0,1,0,1)");
  Rng rng(20240301);
  double worst = 0.0, worst_point = 0.0, worst_equal = 0.0, worst_limit = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const double mx = rng.uniform(-10, 10), my = rng.uniform(-10, 10);
    const double sx = rng.uniform(0.05, 10), sy = rng.uniform(0.05, 10);
    const double a = gaussian_eabs(mx, sx, my, sy);
    const double b = gaussian_eabs_covariance_form(mx, sx, my, sy);
    worst = std::max(worst, std::abs(a - b) / a);
    worst_point = std::max(worst_point, std::abs(gaussian_eabs(mx, sx, my, 0.0) - lukaszyk_point_form(std::abs(mx - my), sx)));
    worst_equal = std::max(worst_equal, std::abs(gaussian_eabs(mx, sx, my, sx) - lukaszyk_equal_variance_form(std::abs(mx - my), sx)));
    worst_limit = std::max(worst_limit, std::abs(gaussian_eabs(mx, sx, my, 1e-9) - lukaszyk_point_form(std::abs(mx - my), sx)));
  }
  c.close(1e-10, worst, 0.0, "max relative gap between the two closed forms over 1e4 tuples");
  c.close(1e-10, worst_point, 0.0, "max gap to the point-mass erfc form");
  c.close(1e-10, worst_equal, 0.0, "max gap to the equal-variance erfc form");
  c.close(1e-8, worst_limit, 0.0, "sigma_Y -> 0 limit");

  const auto start = std::chrono::steady_clock::now();
  const auto g = UnivariateDist::gaussian(0, 1);
  const auto mc = mc_eabs({g, g}, 1000000, 7);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.close(3.0 * mc.std_error, mc.mean, two_over_sqrt_pi, "Monte Carlo n=1e6 within 3 sigma");
  const auto mc2 = mc_eabs({UnivariateDist::gaussian(1, 2), UnivariateDist::gaussian(-1, 3)}, 1000000, 8);
  c.close(3.0 * mc2.std_error, mc2.mean, gaussian_eabs(1, 2, -1, 3), "Monte Carlo unequal variances within 3 sigma");
  c.check(secs < 5.0, "Monte Carlo runtime under 5s");
  return c.report();
}

bool ac4_uniform() {
  Criterion c("AC4 uniform closed forms");
  Rng rng(4);
  double worst = 0.0;
  int per_case[3] = {0, 0, 0};
  while (per_case[0] < 100 || per_case[1] < 100 || per_case[2] < 100) {
    const double a1 = rng.uniform(-5, 5), la = rng.uniform(0.1, 5);
    const double a2 = a1 + la;
    double b1, b2;
    int which;
    if (per_case[0] < 100) {  // overlap without inclusion
      b1 = rng.uniform(a1 + 0.01 * la, a2 - 0.01 * la);
      b2 = a2 + rng.uniform(0.05, 5);
      which = 0;
    } else if (per_case[1] < 100) {  // inclusion
      b1 = rng.uniform(a1, a2 - 0.02 * la);
      b2 = rng.uniform(b1 + 0.01 * la, a2);
      which = 1;
    } else {  // separation
      b1 = a2 + rng.uniform(0.0, 3);
      b2 = b1 + rng.uniform(0.1, 5);
      which = 2;
    }
    if (rng.below(2)) {  // either orientation
      ++per_case[which];
      const double closed = uniform_eabs({b1, b2}, {a1, a2});
      const double ref = quad_eabs({UnivariateDist::uniform(b1, b2), UnivariateDist::uniform(a1, a2)}, 1e-11);
      worst = std::max(worst, std::abs(closed - ref));
    } else {
      ++per_case[which];
      const double closed = uniform_eabs({a1, a2}, {b1, b2});
      const double ref = quad_eabs({UnivariateDist::uniform(a1, a2), UnivariateDist::uniform(b1, b2)}, 1e-11);
      worst = std::max(worst, std::abs(closed - ref));
    }
  }
  c.close(1e-7, worst, 0.0, "max gap to 2D quadrature over 3x100 pairs");

  double worst_point = 0.0;
  for (int k = 0; k < 300; ++k) {
    const double a1 = rng.uniform(-5, 5), a2 = a1 + rng.uniform(0.1, 5);
    const double b = rng.uniform(a1 - 3, a2 + 3);
    const double ref = l1test::simpson_cells([&](double x) { return std::abs(x - b) / (a2 - a1); },
                                             {a1, std::clamp(b, a1, a2), a2}, 200);
    worst_point = std::max(worst_point, std::abs(uniform_point_eabs({a1, a2}, b) - ref));
  }
  c.close(1e-9, worst_point, 0.0, "max gap of the one-point formula to 1D quadrature");
  c.close(1e-12, uniform_eabs({0, 1}, {0, 1}), 1.0 / 3.0, "U(0,1) i.i.d.");
  return c.report();
}

bool ac5_gini() {
  Criterion c("AC5 Gini index and GMD");
  for (double eps : {0.5, 0.1, 0.01})
    for (double b : {1.0, 5.0, 0.7, 3.0}) {
      const auto r = gini_index(UnivariateDist::discrete({0.0, b}, {1.0 - eps, eps}));
      char buf[96];
      std::snprintf(buf, sizeof buf, "epsilon law eps=%g b=%g: got %.17g", eps, b, r.value);
      c.check(r.value == 1.0 - eps, buf);
    }
  for (int n : {2, 5, 100}) {
    std::vector<double> incomes(static_cast<std::size_t>(n), 0.0);
    incomes.back() = 4.0;
    const auto r = gini_index(Discrete::empirical(incomes));
    char buf[96];
    std::snprintf(buf, sizeof buf, "single earner n=%d: got %.17g", n, r.value);
    c.check(r.value == (n - 1.0) / n, buf);
  }
  c.close(1e-12, gmd(UnivariateDist::gaussian(0, 1)), gmd(UnivariateDist::gaussian(7, 1)), "Gaussian GMD at mu=0 vs mu=7");
  return c.report();
}

bool ac6_identities() {
  Criterion c("AC6 GK = GK quantile = W1 = optimal cost");
  Rng rng(6);
  double worst = 0.0;
  int n = 0;
  for (int k = 0; k < 1000; ++k) {
    const Family fa = l1test::kFamilies[k % 4], fb = l1test::kFamilies[(k / 4) % 4];
    const auto mu = l1test::random_of(rng, fa), nu = l1test::random_of(rng, fb);
    const double v[4] = {gk(mu, nu).value, gk_quantile(mu, nu).value, wasserstein_p(mu, nu, 1.0).value,
                         optimal_cost(mu, nu, CostFn::abs())};
    const double spread = *std::max_element(v, v + 4) - *std::min_element(v, v + 4);
    worst = std::max(worst, spread);
    if (spread > 1e-8) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s vs %s: %.12g %.12g %.12g %.12g", family_name(mu).c_str(),
                    family_name(nu).c_str(), v[0], v[1], v[2], v[3]);
      c.check(false, buf);
    }
    ++n;
  }
  c.close(1e-8, worst, 0.0, "max spread over 1000 pairs");
  c.time_limit(30.0);
  return c.report();
}

bool ac7_transport() {
  Criterion c("AC7 transport optimality");
  Rng rng(7);
  for (const CostFn& h : {CostFn::abs(), CostFn::power(2.0)}) {
    for (std::size_t n = 2; n <= 8; ++n) {
      int bad = 0;
      for (int k = 0; k < 500; ++k) {
        std::vector<double> xs(n), ys(n);
        for (auto& v : xs) v = rng.uniform(-10, 10);
        for (auto& v : ys) v = rng.uniform(-10, 10);
        const double sorted = discrete_monge(xs, ys, h).cost;
        const double brute = brute_force_monge(xs, ys, h).cost;
        if (std::abs(sorted - brute) > 1e-9 * (1.0 + brute)) ++bad;
      }
      c.check(bad == 0, h.describe() + " n=" + std::to_string(n) + ": " + std::to_string(bad) + " mismatches");
    }
  }
  int violations = 0;
  for (int k = 0; k < 1000; ++k) {
    const UnivariateDist mu = l1test::random_discrete(rng, 5), nu = l1test::random_discrete(rng, 5);
    const JointDiscrete j = random_coupling(mu, nu, rng);
    const CostFn h = k % 2 ? CostFn::abs() : CostFn::power(2.0);
    if (optimal_cost(mu, nu, h) > plan_cost(TabularPlan{j}, h) + 1e-12) ++violations;
  }
  c.check(violations == 0, std::to_string(violations) + " couplings cheaper than the quantile coupling");
  double worst = 0.0;
  for (int pair = 0; pair < 10; ++pair) {
    const auto mu = l1test::random_any(rng), nu = l1test::random_any(rng);
    const auto plan = optimal_plan(mu, nu);
    for (int k = 0; k < 100; ++k) {
      double a = rng.uniform(-8, 8), b = rng.uniform(-8, 8);
      if (a > b) std::swap(a, b);
      worst = std::max(worst, std::abs(plan_mass(plan, {a, b}, Range::all()) - (cdf(mu, b) - cdf_left(mu, a))));
      worst = std::max(worst, std::abs(plan_mass(plan, Range::all(), {a, b}) - (cdf(nu, b) - cdf_left(nu, a))));
    }
  }
  c.close(1e-9, worst, 0.0, "quantile plan marginal reproduction");
  return c.report();
}

bool ac8_properties() {
  Criterion c("AC8 property suites");
  Rng rng(8);
  int fails = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto x = l1test::random_discrete(rng, 4), y = l1test::random_discrete(rng, 4), z = l1test::random_discrete(rng, 4);
    const TripleTables t(product_coupling(x, y), product_coupling(y, z), product_coupling(x, z));
    if (mean_abs(x) + mean_abs(y) == 0.0 || mean_abs(y) + mean_abs(z) == 0.0 || mean_abs(x) + mean_abs(z) == 0.0) continue;
    if (!check_triangle_dnorm(t).holds) ++fails;
  }
  c.check(fails == 0, std::to_string(fails) + " D_norm triangle failures under independence");

  fails = 0;
  for (int k = 0; k < 100000; ++k) {
    const double x = rng.uniform(-10, 10), y = rng.uniform(-10, 10), z = rng.uniform(-10, 10);
    const double v = std::abs(y - z) * std::abs(x) - std::abs(x - z) * std::abs(y) + std::abs(x - y) * std::abs(z);
    if (v < -1e-12 * (1.0 + std::abs(x) * std::abs(y) + std::abs(y) * std::abs(z) + std::abs(x) * std::abs(z))) ++fails;
  }
  c.check(fails == 0, std::to_string(fails) + " canberra failures");

  fails = 0;
  int tried = 0;
  while (tried < 100000) {
    const double a = rng.uniform(0, 5), b = rng.uniform(0, 5), cc = rng.uniform(0, 5);
    const double al = rng.uniform(0, 3), be = rng.uniform(0, 3), ga = rng.uniform(0, 3);
    if (al - be + ga < 0.0 || al * a - be * b + ga * cc < 0.0) continue;
    ++tried;
    const double v = al * a * a - be * b * b + ga * cc * cc + (al - be + ga) * (a * b + b * cc + a * cc);
    if (v < -1e-10) ++fails;
  }
  c.check(fails == 0, std::to_string(fails) + " (abc) failures");

  fails = 0;
  for (int k = 0; k < 10000; ++k) {
    const std::vector<double> s{-1.0, 0.0, 1.5};
    const auto a = l1test::random_joint(rng, s, s), b = l1test::random_joint(rng, s, s), d = l1test::random_joint(rng, s, s);
    const double p = 1.0 + rng.uniform(0, 3);
    const double ab = eta_p({a, b, p}), ba = eta_p({b, a, p}), ad = eta_p({a, d, p}), db = eta_p({d, b, p});
    if (ab < 0.0 || eta_p({a, a, p}) != 0.0 || std::abs(ab - ba) > 1e-15 || ab > ad + db + 1e-12) ++fails;
  }
  c.check(fails == 0, std::to_string(fails) + " eta_p semimetric failures");
  const auto pp = fixtures::pi1pi2();
  c.check(!(pp.first == pp.second), "pi1 and pi2 differ");
  for (double p : {1.0, 2.0, 3.5}) c.close(1e-12, eta_p({pp.first, pp.second, p}), 0.0, "eta_p(pi1, pi2)");

  fails = 0;
  for (int k = 0; k < 10000; ++k) {
    const auto d = l1test::random_any(rng);
    const double t = k % 10 == 0 ? 1.0 : rng.uniform_open();
    double x = rng.uniform(-8, 8);
    if (k % 3 == 0) x = quantile_minus(d, rng.uniform_open()).value();  // land on atoms too
    // a Gaussian cdf rounds to 1.0 in the far right tail although the true value is below 1
    if (t == 1.0 && d.get_if<Gaussian>() && cdf(d, x) == 1.0) continue;
    if ((quantile_minus(d, t) <= ExtendedReal(x)) != (t <= cdf(d, x))) ++fails;
  }
  c.check(fails == 0, std::to_string(fails) + " Galois property failures");

  for (const auto& d : {UnivariateDist::gaussian(1.5, 2.0), UnivariateDist::uniform(-1, 3)}) {
    Rng r(99);
    auto xs = sample(d, r, 100000);
    std::vector<double> u(xs.size());
    std::transform(xs.begin(), xs.end(), u.begin(), [&](double x) { return cdf(d, x); });
    std::sort(u.begin(), u.end());
    double ks = 0.0;
    const double n = static_cast<double>(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) ks = std::max({ks, (i + 1) / n - u[i], u[i] - i / n});
    // 0.1% critical value of the Kolmogorov distribution
    c.check(ks < 1.9495 / std::sqrt(n), family_name(d) + " KS statistic " + std::to_string(ks));
  }
  return c.report();
}

}  // namespace

int main() {
  bool ok = true;
  for (auto* fn : {ac1_tables, ac2_triangle, ac3_gaussian, ac4_uniform, ac5_gini, ac6_identities, ac7_transport, ac8_properties}) {
    try {
      ok = fn() && ok;
    } catch (const std::exception& e) {
      std::printf("FAIL (exception: %s)\n", e.what());
      ok = false;
    }
  }
  return ok ? 0 : 1;
}
