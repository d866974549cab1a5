#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "l1metrics/distributions.hpp"
#include "l1metrics/joints.hpp"
#include "l1metrics/quadrature.hpp"

namespace l1metrics {

/// Bounded proper interval [lo, hi], lo < hi.
struct Interval {
  double lo;
  double hi;

  Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("interval: bounds must be finite");
    if (!(lo < hi)) throw std::invalid_argument("interval: degenerate or reversed bounds");
  }
  double length() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
  bool contains(double x) const { return x >= lo && x <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// X ~ x and Y ~ y, independent by construction (product coupling).
struct IndependentPair {
  UnivariateDist x;
  UnivariateDist y;
};

/// E|X - Y| = sum |x_i - y_j| p_ij.
inline double eabs_joint(const JointDiscrete& j) {
  return j.expect([](double x, double y) { return std::abs(x - y); });
}

// ---------------------------------------------------------------------------
// Gaussian closed forms

/// E|X - Y| for independent N(muX, sX^2), N(muY, sY^2) via the law of X - Y:
///   d [2 Phi(d/s) - 1] + 2 s phi(d/s),  d = |muX - muY|,  s = sqrt(sX^2 + sY^2).
/// A zero sigma is the point-mass limit; s = 0 gives |muX - muY|.
inline double gaussian_eabs(double mu_x, double sigma_x, double mu_y, double sigma_y) {
  if (sigma_x < 0.0 || sigma_y < 0.0) throw std::domain_error("gaussian_eabs: negative sigma");
  return gaussian_point_eabs(mu_x - mu_y, std::hypot(sigma_x, sigma_y), 0.0);
}

/// The same quantity in the three-term form obtained from
/// E|X-Y| = 2{E[X G(X)] + E[Y F(Y)]} - muX - muY. Each phi * exp product is
/// evaluated in the log domain. Requires both sigmas > 0.
inline double gaussian_eabs_covariance_form(double mu_x, double sigma_x, double mu_y, double sigma_y) {
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0))
    throw std::domain_error("gaussian_eabs_covariance_form: both sigmas must be > 0");
  const double d = std::abs(mu_x - mu_y);
  const double vx = sigma_x * sigma_x, vy = sigma_y * sigma_y;
  const double s2 = vx + vy;
  const double s = std::sqrt(s2);
  const double zy = d / sigma_y, zx = d / sigma_x;
  const double e1 = -0.5 * zy * zy + vx * d * d / (2.0 * vy * s2);
  const double e2 = -0.5 * zx * zx + vy * d * d / (2.0 * vx * s2);
  return 2.0 * vx / s * kInvSqrt2Pi * std::exp(e1) + 2.0 * vy / s * kInvSqrt2Pi * std::exp(e2) +
         2.0 * d * normal_cdf(d / s) - d;
}

/// Point-mass form in erfc notation: E|X - b|, X ~ N(mu, sigma^2), with mu_xy = |mu - b|.
inline double lukaszyk_point_form(double mu_xy, double sigma) {
  return mu_xy + std::numbers::sqrt2 * sigma / std::sqrt(std::numbers::pi) * std::exp(-mu_xy * mu_xy / (2.0 * sigma * sigma)) -
         mu_xy * std::erfc(mu_xy / (std::numbers::sqrt2 * sigma));
}

/// Equal-variance form in erfc notation: X ~ N(muX, sigma^2), Y ~ N(muY, sigma^2).
inline double lukaszyk_equal_variance_form(double mu_xy, double sigma) {
  return mu_xy + 2.0 * sigma / std::sqrt(std::numbers::pi) * std::exp(-mu_xy * mu_xy / (4.0 * sigma * sigma)) -
         mu_xy * std::erfc(mu_xy / (2.0 * sigma));
}

/// E|X - Y| for a bivariate normal pair with correlation rho: the folded-normal
/// mean of X - Y ~ N(muX - muY, sX^2 + sY^2 - 2 rho sX sY).
inline double gaussian_eabs_correlated(double mu_x, double sigma_x, double mu_y, double sigma_y, double rho) {
  if (!(std::abs(rho) < 1.0)) throw std::domain_error("gaussian_eabs_correlated: |rho| must be < 1");
  if (!(sigma_x > 0.0) || !(sigma_y > 0.0)) throw std::domain_error("gaussian_eabs_correlated: sigmas must be > 0");
  const double var = sigma_x * sigma_x + sigma_y * sigma_y - 2.0 * rho * sigma_x * sigma_y;
  return gaussian_point_eabs(mu_x - mu_y, std::sqrt(std::max(var, 0.0)), 0.0);
}

// ---------------------------------------------------------------------------
// Uniform closed forms

/// E|X - b| for X ~ U(A).
inline double uniform_point_eabs(const Interval& a, double b) { return uniform_point_abs(a.lo, a.hi, b); }

/// E|X - Y| for independent X ~ U(A), Y ~ U(B). Pairs are reordered so that
/// a1 <= b1, then dispatched: separated (or touching) intervals, inclusion B in A,
/// and overlap without inclusion.
inline double uniform_eabs(Interval a, Interval b) {
  if (a.hi <= b.lo || b.hi <= a.lo) return std::abs(a.midpoint() - b.midpoint());
  if (b.lo < a.lo || (b.lo == a.lo && b.hi > a.hi)) std::swap(a, b);
  const double a1 = a.lo, a2 = a.hi, b1 = b.lo, b2 = b.hi;
  const double scale = 1.0 / (a.length() * b.length());
  const double first = (b2 - b1) * (b1 - a1) * (b2 - a1) / 2.0;
  const double second = (b2 - a2) * (a2 - b1) * (b2 - b1) / 2.0;
  if (b2 <= a2) {
    const double lb = b2 - b1;
    return scale * (first - second + lb * lb * lb / 3.0);
  }
  const double ov = a2 - b1;
  return scale * (first + second + ov * ov * ov / 3.0);
}

/// Mean of {|a - b| : a in A, b in B}. Symmetric and satisfies the triangle
/// inequality, but D(A, A) > 0.
inline double interval_mean_distance(const Interval& a, const Interval& b) { return uniform_eabs(a, b); }

/// Mean of {|a| : a in A}.
inline double interval_mean_abs(const Interval& a) { return uniform_point_abs(a.lo, a.hi, 0.0); }

/// D(A,B) / (S_A + S_B).
inline double interval_mean_distance_norm(const Interval& a, const Interval& b) {
  const double denom = interval_mean_abs(a) + interval_mean_abs(b);
  return denom > 0.0 ? interval_mean_distance(a, b) / denom : 0.0;
}

// ---------------------------------------------------------------------------
// Independent pairs of arbitrary families

/// E|X - c|.
inline double point_eabs(const UnivariateDist& d, double c) {
  return d.visit(overloaded{[c](const Discrete& dd) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < dd.size(); ++i) s += std::abs(dd.points()[i] - c) * dd.weights()[i];
                              return s;
                            },
                            [c](const Gaussian& g) { return gaussian_point_eabs(g.mu, g.sigma, c); },
                            [c](const Uniform& u) { return uniform_point_abs(u.a, u.b, c); },
                            [c](const Dirac& dr) { return std::abs(dr.c - c); }});
}

/// E|X - Y| for independent X and Y, dispatched to the exact route for each
/// family pair. Gaussian x Uniform integrates the Gaussian one-point formula over B.
inline double eabs_product(const UnivariateDist& x, const UnivariateDist& y) {
  if (const auto* dx = x.get_if<Dirac>()) return point_eabs(y, dx->c);
  if (const auto* dy = y.get_if<Dirac>()) return point_eabs(x, dy->c);
  if (const auto* ax = x.get_if<Discrete>()) {
    double s = 0.0;
    for (std::size_t i = 0; i < ax->size(); ++i)
      if (ax->weights()[i] > 0.0) s += ax->weights()[i] * point_eabs(y, ax->points()[i]);
    return s;
  }
  if (y.is<Discrete>()) return eabs_product(y, x);
  const auto* gx = x.get_if<Gaussian>();
  const auto* gy = y.get_if<Gaussian>();
  if (gx && gy) return gaussian_eabs(gx->mu, gx->sigma, gy->mu, gy->sigma);
  const auto* ux = x.get_if<Uniform>();
  const auto* uy = y.get_if<Uniform>();
  if (ux && uy) return uniform_eabs(Interval(ux->a, ux->b), Interval(uy->a, uy->b));
  const Gaussian g = gx ? *gx : *gy;
  const Uniform u = ux ? *ux : *uy;
  const auto cells = quad::make_cells(u.a, u.b, {g.mu});
  return quad::integrate_cells([&](double b) { return gaussian_point_eabs(g.mu, g.sigma, b); }, cells) / u.length();
}

inline double eabs_product(const IndependentPair& p) { return eabs_product(p.x, p.y); }

/// Result of the covariance representation. `iid_cov_form` holds 4 cov[X, F(X)]
/// when both components are the same law.
struct CovRepresentation {
  double value;
  std::optional<double> iid_cov_form;
};

namespace detail {
inline std::pair<double, double> integration_range(const UnivariateDist& d) {
  if (const auto* g = d.get_if<Gaussian>()) return {g->mu - 10.0 * g->sigma, g->mu + 10.0 * g->sigma};
  const auto& u = std::get<Uniform>(d.variant());
  return {u.a, u.b};
}

// E[X H(X)] for X ~ d, with H the CDF of `other`.
inline double expect_x_times_cdf(const UnivariateDist& d, const UnivariateDist& other) {
  const auto [lo, hi] = integration_range(d);
  std::vector<double> interior = cdf_breakpoints(other);
  if (const auto* g = d.get_if<Gaussian>()) interior.push_back(g->mu);
  if (const auto* g = other.get_if<Gaussian>()) interior.push_back(g->mu);
  const auto cells = quad::make_cells(lo, hi, interior);
  return quad::integrate_cells([&](double x) { return x * cdf(other, x) * density(d, x); }, cells, 1e-13);
}
}  // namespace detail

/// E|X - Y| = 2{E[X G(X)] + E[Y F(Y)]} - muX - muY by quadrature, for Gaussian or
/// uniform components. For identical components the 4 cov[X, F(X)] form is also
/// evaluated and must agree within 1e-8.
inline CovRepresentation eabs_cov_representation(const IndependentPair& p) {
  if (!is_continuous(p.x) || !is_continuous(p.y))
    throw std::invalid_argument("eabs_cov_representation: requires gaussian or uniform components");
  const double exg = detail::expect_x_times_cdf(p.x, p.y);
  const double eyf = detail::expect_x_times_cdf(p.y, p.x);
  CovRepresentation out{2.0 * (exg + eyf) - mean(p.x) - mean(p.y), std::nullopt};
  if (p.x == p.y) {
    const double cov = exg - 0.5 * mean(p.x);
    out.iid_cov_form = 4.0 * cov;
    if (std::abs(*out.iid_cov_form - out.value) > 1e-8)
      throw std::logic_error("eabs_cov_representation: i.i.d. covariance form disagrees");
  }
  return out;
}

}  // namespace l1metrics
