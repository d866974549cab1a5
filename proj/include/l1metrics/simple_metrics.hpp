#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "l1metrics/distributions.hpp"
#include "l1metrics/quadrature.hpp"

namespace l1metrics {

struct MetricResult {
  enum class Method { cdf_integral, quantile_integral, discrete_exact };
  double value;
  Method method;
};

inline const char* to_string(MetricResult::Method m) {
  switch (m) {
    case MetricResult::Method::cdf_integral: return "cdf_integral";
    case MetricResult::Method::quantile_integral: return "quantile_integral";
    case MetricResult::Method::discrete_exact: return "discrete_exact";
  }
  return "?";
}

namespace detail {

// Quantile integrals are taken in z with t = Phi(z); beyond |z| = 8.2 the
// remaining mass is below 1e-15.
inline constexpr double kZLimit = 8.2;

// F^-(Phi(z)), finite for every z. Gaussian quantiles skip the round trip through t.
inline double quantile_at_z(const UnivariateDist& d, double z) {
  if (const auto* g = d.get_if<Gaussian>()) return g->mu + g->sigma * z;
  double t = normal_cdf(z);
  if (t <= 0.0) t = 0x1.0p-1074;
  if (t > 1.0) t = 1.0;
  return quantile_minus(d, t).value();
}

inline std::vector<double> merged_levels(const UnivariateDist& mu, const UnivariateDist& nu) {
  std::vector<double> lv = quantile_jump_levels(mu);
  const auto b = quantile_jump_levels(nu);
  lv.insert(lv.end(), b.begin(), b.end());
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  return lv;
}

/// Sum over the cells between consecutive levels of length * h(q1(t) - q2(t)),
/// with t the cell midpoint. Exact when both quantile functions are step
/// functions jumping only at `levels`.
template <class Q1, class Q2, class H>
double quantile_step_sum(Q1&& q1, Q2&& q2, const std::vector<double>& levels, H&& h) {
  std::vector<double> t{0.0};
  t.insert(t.end(), levels.begin(), levels.end());
  t.push_back(1.0);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double mid = 0.5 * (t[k] + t[k + 1]);
    s += (t[k + 1] - t[k]) * h(q1(mid) - q2(mid));
  }
  return s;
}

/// Integral over z of h(q1(z) - q2(z)) phi(z), where q(z) = F^-(Phi(z)), split at
/// Phi^-1 of the jump levels and at the crossings of q1 and q2.
template <class Q1, class Q2, class H>
double quantile_z_integral(Q1&& q1, Q2&& q2, const std::vector<double>& levels, H&& h,
                           double tol = quad::kDefaultTolerance) {
  std::vector<double> zs;
  for (double l : levels) zs.push_back(normal_quantile(l));
  auto diff = [&](double z) { return q1(z) - q2(z); };
  const auto cells = quad::split_at_sign_changes(diff, quad::make_cells(-kZLimit, kZLimit, zs));
  return quad::integrate_cells([&](double z) { return h(diff(z)) * normal_pdf(z); }, cells, tol);
}

/// Integral over (0,1) of h(F^-(t) - G^-(t)). Exact for two atomic laws,
/// quadrature in z = Phi^-1(t) otherwise.
template <class H>
MetricResult quantile_integral(const UnivariateDist& mu, const UnivariateDist& nu, H&& h,
                               double tol = quad::kDefaultTolerance) {
  const auto levels = merged_levels(mu, nu);
  if (is_atomic(mu) && is_atomic(nu)) {
    auto qa = [&](double t) { return quantile_minus(mu, t).value(); };
    auto qb = [&](double t) { return quantile_minus(nu, t).value(); };
    return {quantile_step_sum(qa, qb, levels, h), MetricResult::Method::discrete_exact};
  }
  auto qa = [&](double z) { return quantile_at_z(mu, z); };
  auto qb = [&](double z) { return quantile_at_z(nu, z); };
  return {quantile_z_integral(qa, qb, levels, h, tol), MetricResult::Method::quantile_integral};
}

}  // namespace detail

/// Gini-Kantorovich distance: integral over R of |F(x) - G(x)|.
inline MetricResult gk(const UnivariateDist& mu, const UnivariateDist& nu) {
  std::vector<double> pts = cdf_breakpoints(mu);
  const auto b = cdf_breakpoints(nu);
  pts.insert(pts.end(), b.begin(), b.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (is_atomic(mu) && is_atomic(nu)) {
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < pts.size(); ++k)
      s += std::abs(cdf(mu, pts[k]) - cdf(nu, pts[k])) * (pts[k + 1] - pts[k]);
    return {s, MetricResult::Method::discrete_exact};
  }
  const auto [lo1, hi1] = effective_support(mu);
  const auto [lo2, hi2] = effective_support(nu);
  const double lo = std::min(lo1, lo2), hi = std::max(hi1, hi2);
  auto diff = [&](double x) { return cdf(mu, x) - cdf(nu, x); };
  const auto cells = quad::split_at_sign_changes(diff, quad::make_cells(lo, hi, pts));
  const double v = quad::integrate_cells([&](double x) { return std::abs(diff(x)); }, cells);
  return {v, MetricResult::Method::cdf_integral};
}

/// The same distance from the quantile side: integral over (0,1) of |F^- - G^-|.
inline MetricResult gk_quantile(const UnivariateDist& mu, const UnivariateDist& nu) {
  return detail::quantile_integral(mu, nu, [](double u) { return std::abs(u); });
}

/// (integral over (0,1) of |F^- - G^-|^p)^(1/p), p >= 1.
inline MetricResult wasserstein_p(const UnivariateDist& mu, const UnivariateDist& nu, double p) {
  if (!(p >= 1.0)) throw std::domain_error("wasserstein_p: p must be >= 1");
  auto r = detail::quantile_integral(mu, nu, [p](double u) { return std::pow(std::abs(u), p); });
  r.value = std::pow(r.value, 1.0 / p);
  return r;
}

}  // namespace l1metrics
