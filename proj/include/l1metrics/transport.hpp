#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "l1metrics/distributions.hpp"
#include "l1metrics/joints.hpp"
#include "l1metrics/quadrature.hpp"
#include "l1metrics/rng.hpp"
#include "l1metrics/simple_metrics.hpp"

namespace l1metrics {

/// Cost c(x, y) = h(x - y) with h convex and continuous.
class CostFn {
 public:
  enum class Kind { abs, power, custom };

  static CostFn abs() { return CostFn(Kind::abs, 1.0, [](double u) { return std::abs(u); }); }

  static CostFn power(double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("cost: power exponent must be >= 1");
    if (p == 1.0) return CostFn(Kind::power, 1.0, [](double u) { return std::abs(u); });
    if (p == 2.0) return CostFn(Kind::power, 2.0, [](double u) { return u * u; });
    return CostFn(Kind::power, p, [p](double u) { return std::pow(std::abs(u), p); });
  }

  /// User-supplied h. Accepted only if the caller attests convexity and h passes
  /// a midpoint-convexity check on 1000 random pairs in [-scale, scale].
  static CostFn custom(std::function<double(double)> h, bool attested_convex, double scale = 10.0) {
    if (!attested_convex) throw std::invalid_argument("cost: custom h requires a convexity attestation");
    Rng rng(0x636f6e766578ULL);
    for (int k = 0; k < 1000; ++k) {
      const double u = rng.uniform(-scale, scale), v = rng.uniform(-scale, scale);
      const double hu = h(u), hv = h(v), hm = h(0.5 * (u + v));
      if (!std::isfinite(hu) || !std::isfinite(hv) || !std::isfinite(hm))
        throw std::invalid_argument("cost: custom h is not finite");
      if (hm > 0.5 * (hu + hv) + 1e-12 * (1.0 + std::abs(hu) + std::abs(hv)))
        throw std::invalid_argument("cost: custom h failed the midpoint-convexity check");
    }
    return CostFn(Kind::custom, std::numeric_limits<double>::quiet_NaN(), std::move(h));
  }

  Kind kind() const { return kind_; }
  double exponent() const { return p_; }
  double h(double u) const { return h_(u); }
  double operator()(double x, double y) const { return h_(x - y); }

  std::string describe() const {
    switch (kind_) {
      case Kind::abs: return "abs";
      case Kind::power: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "power:%.17g", p_);
        return buf;
      }
      case Kind::custom: return "custom";
    }
    return "?";
  }

 private:
  CostFn(Kind k, double p, std::function<double(double)> h) : kind_(k), p_(p), h_(std::move(h)) {}
  Kind kind_;
  double p_;
  std::function<double(double)> h_;
};

/// A law given as the image of `base` under a non-decreasing map. Without a map
/// it is `base` itself. The quantile is map(F_base^-), the CDF F_base(inverse(y)).
struct Marginal {
  struct Monotone {
    std::function<double(double)> map;
    std::function<double(double)> inverse;  // may return +-inf outside the range of map
    std::string name;
  };

  UnivariateDist base;
  std::optional<Monotone> transform;

  Marginal(UnivariateDist d) : base(std::move(d)) {}  // NOLINT(implicit)
  Marginal(UnivariateDist d, Monotone m) : base(std::move(d)), transform(std::move(m)) {}

  /// exp(X) for X ~ N(mu, sigma^2); quantile exp o Phi^-1 when (mu, sigma) = (0, 1).
  static Marginal lognormal(double mu = 0.0, double sigma = 1.0) {
    return Marginal(UnivariateDist::gaussian(mu, sigma),
                    Monotone{[](double x) { return std::exp(x); },
                             [](double y) { return y > 0.0 ? std::log(y) : -std::numeric_limits<double>::infinity(); },
                             "exp"});
  }

  bool plain() const { return !transform.has_value(); }
  double apply(double x) const { return transform ? transform->map(x) : x; }
  double unapply(double y) const { return transform ? transform->inverse(y) : y; }

  double cdf(double y) const {
    const double x = unapply(y);
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    return l1metrics::cdf(base, x);
  }
  double cdf_left(double y) const {
    const double x = unapply(y);
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    return l1metrics::cdf_left(base, x);
  }
  ExtendedReal quantile_minus(double t) const {
    const ExtendedReal q = l1metrics::quantile_minus(base, t);
    return q.is_finite() ? ExtendedReal(apply(q.value())) : q;
  }
  double quantile_at_z(double z) const { return apply(detail::quantile_at_z(base, z)); }

  friend bool operator==(const Marginal& a, const Marginal& b) {
    if (!(a.base == b.base) || a.transform.has_value() != b.transform.has_value()) return false;
    return !a.transform || a.transform->name == b.transform->name;
  }
};

/// T = G^- o F with F the CDF of a continuous law and G^- the quantile of the target.
struct QuantileCompose {
  UnivariateDist source;
  Marginal target;

  double operator()(double x) const {
    if (const auto* g = source.get_if<Gaussian>()) return target.quantile_at_z((x - g->mu) / g->sigma);
    const double t = cdf(source, x);
    if (t <= 0.0) return target.quantile_minus(std::numeric_limits<double>::min()).value();
    return target.quantile_minus(t).value();
  }
};

/// Equal-mass discrete map sources[i] -> targets[sigma[i]] (0-based sigma).
struct Permutation {
  std::vector<std::size_t> sigma;
  std::vector<double> sources;
  std::vector<double> targets;

  Permutation(std::vector<std::size_t> s, std::vector<double> src, std::vector<double> tgt)
      : sigma(std::move(s)), sources(std::move(src)), targets(std::move(tgt)) {
    const std::size_t n = sigma.size();
    if (sources.size() != n || targets.size() != n) throw std::invalid_argument("permutation: size mismatch");
    std::vector<bool> seen(n, false);
    for (std::size_t v : sigma) {
      if (v >= n || seen[v]) throw std::invalid_argument("permutation: sigma is not a bijection");
      seen[v] = true;
    }
  }
};

using TransportMap = std::variant<QuantileCompose, Permutation>;

struct TabularPlan {
  JointDiscrete table;
};

/// Quantile coupling: the image of Lebesgue measure on (0,1] under t -> (F^-(t), G^-(t)).
struct QuantilePlan {
  Marginal mu;
  Marginal nu;
};

struct DeterministicPlan {
  UnivariateDist mu;  // for a Permutation map this is the uniform law on the sources
  TransportMap map;
};

using TransportPlan = std::variant<TabularPlan, QuantilePlan, DeterministicPlan>;

/// The optimal plan for every convex cost: the quantile coupling of (mu, nu).
inline TransportPlan optimal_plan(const Marginal& mu, const Marginal& nu) { return QuantilePlan{mu, nu}; }

/// P(X <= x, Y <= y) under the plan. For the quantile coupling this is min{F(x), G(y)}.
inline double plan_cdf(const TransportPlan& plan, double x, double y) {
  return std::visit(
      overloaded{[&](const TabularPlan& p) {
                   return p.table.expect([&](double a, double b) { return (a <= x && b <= y) ? 1.0 : 0.0; });
                 },
                 [&](const QuantilePlan& p) { return std::min(p.mu.cdf(x), p.nu.cdf(y)); },
                 [&](const DeterministicPlan& p) {
                   return std::visit(overloaded{[&](const QuantileCompose& m) {
                                                  return std::min(cdf(p.mu, x), m.target.cdf(y));
                                                },
                                                [&](const Permutation& m) {
                                                  double s = 0.0;
                                                  for (std::size_t i = 0; i < m.sigma.size(); ++i)
                                                    if (m.sources[i] <= x && m.targets[m.sigma[i]] <= y) s += 1.0;
                                                  return s / static_cast<double>(m.sigma.size());
                                                }},
                                     p.map);
                 }},
      plan);
}

namespace detail {
// Equal-weight atoms of a discrete law with n points, when every weight is 1/n.
inline std::optional<std::vector<double>> equal_mass_points(const UnivariateDist& d) {
  const Discrete dd = to_discrete(d);
  std::vector<double> pts;
  for (std::size_t i = 0; i < dd.size(); ++i)
    if (dd.weights()[i] > 0.0) pts.push_back(dd.points()[i]);
  const double w = 1.0 / static_cast<double>(pts.size());
  for (double v : dd.weights())
    if (v > 0.0 && std::abs(v - w) > 1e-12) return std::nullopt;
  return pts;
}
}  // namespace detail

/// The quantile plan written as a map, when one exists: T = G^- o F for a
/// continuous untransformed source, or the sorted matching for two equal-mass
/// discrete laws of the same size.
inline std::optional<DeterministicPlan> deterministic_form(const TransportPlan& plan) {
  const auto* q = std::get_if<QuantilePlan>(&plan);
  if (!q || !q->mu.plain()) return std::nullopt;
  if (is_continuous(q->mu.base)) return DeterministicPlan{q->mu.base, QuantileCompose{q->mu.base, q->nu}};
  if (!q->nu.plain() || is_continuous(q->nu.base)) return std::nullopt;
  const auto xs = detail::equal_mass_points(q->mu.base);
  const auto ys = detail::equal_mass_points(q->nu.base);
  if (!xs || !ys || xs->size() != ys->size()) return std::nullopt;
  std::vector<std::size_t> id(xs->size());
  std::iota(id.begin(), id.end(), 0);
  return DeterministicPlan{q->mu.base, Permutation(std::move(id), *xs, *ys)};
}

/// Integral over (0,1) of h(F^-(t) - G^-(t)): the minimal expected cost.
inline double optimal_cost(const Marginal& mu, const Marginal& nu, const CostFn& c) {
  auto h = [&c](double u) { return c.h(u); };
  if (mu.plain() && nu.plain()) return detail::quantile_integral(mu.base, nu.base, h).value;
  const auto levels = detail::merged_levels(mu.base, nu.base);
  if (is_atomic(mu.base) && is_atomic(nu.base))
    return detail::quantile_step_sum([&](double t) { return mu.quantile_minus(t).value(); },
                                     [&](double t) { return nu.quantile_minus(t).value(); }, levels, h);
  return detail::quantile_z_integral([&](double z) { return mu.quantile_at_z(z); },
                                     [&](double z) { return nu.quantile_at_z(z); }, levels, h);
}

/// Expected cost of an arbitrary plan.
inline double plan_cost(const TransportPlan& plan, const CostFn& c) {
  return std::visit(
      overloaded{
          [&](const TabularPlan& p) { return p.table.expect([&c](double x, double y) { return c(x, y); }); },
          [&](const QuantilePlan& p) { return optimal_cost(p.mu, p.nu, c); },
          [&](const DeterministicPlan& p) {
            return std::visit(
                overloaded{[&](const QuantileCompose& m) {
                             // E h(X - T(X)) against the density of X
                             if (!is_continuous(p.mu)) throw std::invalid_argument("plan_cost: map source must be continuous");
                             const double lo = quantile(p.mu, 1e-15), hi = quantile(p.mu, 1.0 - 1e-15);
                             std::vector<double> interior = cdf_breakpoints(p.mu);
                             for (double l : quantile_jump_levels(m.target.base)) interior.push_back(quantile(p.mu, l));
                             auto g = [&](double x) { return x - m(x); };
                             const auto cells = quad::split_at_sign_changes(g, quad::make_cells(lo, hi, interior));
                             return quad::integrate_cells([&](double x) { return c.h(g(x)) * density(p.mu, x); }, cells);
                           },
                           [&](const Permutation& m) {
                             double s = 0.0;
                             for (std::size_t i = 0; i < m.sigma.size(); ++i) s += c(m.sources[i], m.targets[m.sigma[i]]);
                             return s / static_cast<double>(m.sigma.size());
                           }},
                p.map);
          }},
      plan);
}

struct MongeResult {
  std::vector<std::size_t> sigma;  // xs[i] is matched with ys[sigma[i]]
  double cost;
};

/// Sorted matching of two equal-size point sets; optimal for every convex h.
/// Ties in the inputs keep their original order.
inline MongeResult discrete_monge(const std::vector<double>& xs, const std::vector<double>& ys, const CostFn& c) {
  if (xs.size() != ys.size()) throw std::invalid_argument("discrete_monge: length mismatch");
  const std::size_t n = xs.size();
  std::vector<std::size_t> ix(n), iy(n);
  std::iota(ix.begin(), ix.end(), 0);
  std::iota(iy.begin(), iy.end(), 0);
  std::stable_sort(ix.begin(), ix.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::stable_sort(iy.begin(), iy.end(), [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });
  MongeResult r{std::vector<std::size_t>(n), 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    r.sigma[ix[k]] = iy[k];
    r.cost += c(xs[ix[k]], ys[iy[k]]);
  }
  return r;
}

inline constexpr std::size_t kBruteForceLimit = 9;

/// Minimum of sum h(x_i - y_sigma(i)) over all n! permutations; the
/// lexicographically smallest minimizer wins ties.
inline MongeResult brute_force_monge(const std::vector<double>& xs, const std::vector<double>& ys, const CostFn& c) {
  if (xs.size() != ys.size()) throw std::invalid_argument("brute_force_monge: length mismatch");
  if (xs.size() > kBruteForceLimit) throw std::invalid_argument("brute_force_monge: n too large (max 9)");
  std::vector<std::size_t> s(xs.size());
  std::iota(s.begin(), s.end(), 0);
  MongeResult best{s, std::numeric_limits<double>::infinity()};
  do {
    double cost = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) cost += c(xs[i], ys[s[i]]);
    if (cost < best.cost) best = {s, cost};
  } while (std::next_permutation(s.begin(), s.end()));
  return best;
}

/// Closed range [lo, hi] of the real line; either end may be infinite.
struct Range {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  static Range all() { return {}; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

namespace detail {
// {t in (0,1] : q(t) in [lo, hi]} = (F(lo-), F(hi)] for a non-decreasing quantile.
inline std::pair<double, double> level_window(const Marginal& m, const Range& r) {
  const double a = r.lo == -std::numeric_limits<double>::infinity() ? 0.0 : m.cdf_left(r.lo);
  const double b = r.hi == std::numeric_limits<double>::infinity() ? 1.0 : m.cdf(r.hi);
  return {a, b};
}
inline double window_overlap(std::pair<double, double> u, std::pair<double, double> v) {
  return std::max(0.0, std::min(u.second, v.second) - std::max(u.first, v.first));
}
}  // namespace detail

/// Mass the plan moves from A to B.
inline double plan_mass(const TransportPlan& plan, const Range& a, const Range& b) {
  return std::visit(
      overloaded{[&](const TabularPlan& p) {
                   return p.table.expect([&](double x, double y) { return (a.contains(x) && b.contains(y)) ? 1.0 : 0.0; });
                 },
                 [&](const QuantilePlan& p) {
                   return detail::window_overlap(detail::level_window(p.mu, a), detail::level_window(p.nu, b));
                 },
                 [&](const DeterministicPlan& p) {
                   return std::visit(
                       overloaded{[&](const QuantileCompose& m) {
                                    return detail::window_overlap(detail::level_window(Marginal(p.mu), a),
                                                                  detail::level_window(m.target, b));
                                  },
                                  [&](const Permutation& m) {
                                    double s = 0.0;
                                    for (std::size_t i = 0; i < m.sigma.size(); ++i)
                                      if (a.contains(m.sources[i]) && b.contains(m.targets[m.sigma[i]])) s += 1.0;
                                    return s / static_cast<double>(m.sigma.size());
                                  }},
                       p.map);
                 }},
      plan);
}

struct PolylinePoint {
  double t;
  double x;  // F^-(t)
  double y;  // G^-(t)
};

/// Samples of the support curve t -> (F^-(t), G^-(t)) at t = (k - 1/2) / n.
inline std::vector<PolylinePoint> quantile_polyline(const QuantilePlan& plan, std::size_t resolution) {
  if (resolution == 0) throw std::invalid_argument("quantile_polyline: resolution must be positive");
  std::vector<PolylinePoint> out;
  out.reserve(resolution);
  for (std::size_t k = 1; k <= resolution; ++k) {
    const double t = (static_cast<double>(k) - 0.5) / static_cast<double>(resolution);
    out.push_back({t, plan.mu.quantile_minus(t).value(), plan.nu.quantile_minus(t).value()});
  }
  return out;
}

}  // namespace l1metrics
