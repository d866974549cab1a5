#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "l1metrics/abs_diff.hpp"
#include "l1metrics/joints.hpp"

namespace l1metrics {

/// E|X - Y| / (E|X| + E|Y|), or 0 when both X and Y vanish a.s.
inline double d_norm(double eabs, double ex, double ey) {
  const double denom = ex + ey;
  if (!(denom > 0.0)) return 0.0;
  if (eabs > denom * (1.0 + 1e-12) + 1e-12)
    throw std::domain_error("d_norm: E|X-Y| exceeds E|X| + E|Y|; inputs are inconsistent");
  return eabs / denom;
}

/// Gini mean difference E|X - Y| for X, Y i.i.d. ~ mu.
inline double gmd(const UnivariateDist& mu) { return eabs_product(mu, mu); }

struct GiniReport {
  double value;
  bool absolute_denominator;  // 2 E|X| was used because the support is signed
};

namespace detail {
inline bool has_negative_support(const UnivariateDist& d) {
  return d.visit(overloaded{[](const Discrete& dd) {
                              for (std::size_t i = 0; i < dd.size(); ++i)
                                if (dd.points()[i] < 0.0 && dd.weights()[i] > 0.0) return true;
                              return false;
                            },
                            [](const Gaussian& g) { return g.sigma > 0.0 || g.mu < 0.0; },
                            [](const Uniform& u) { return u.a < 0.0; },
                            [](const Dirac& dr) { return dr.c < 0.0; }});
}
}  // namespace detail

/// GMD / (2 E X) for non-negative laws; laws with signed support use 2 E|X|.
/// Non-negative atomic laws go through the Lorenz curve, G = 1 - sum w_i (L_{i-1} + L_i),
/// which is the same quantity with less rounding (a two-point law {0, b} gives 1 - w_b exactly).
inline GiniReport gini_index(const UnivariateDist& mu) {
  const bool signed_support = detail::has_negative_support(mu);
  const double denom = 2.0 * (signed_support ? mean_abs(mu) : mean(mu));
  if (!(denom > 0.0)) throw std::domain_error("gini_index: degenerate-at-zero (X = 0 almost surely)");
  if (!signed_support && is_atomic(mu)) {
    const Discrete d = to_discrete(mu);
    std::vector<double> partial(d.size());
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) partial[i] = (s += d.weights()[i] * d.points()[i]);
    double area = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const double l = partial[i] / s;
      area += d.weights()[i] * (prev + l);
      prev = l;
    }
    return {1.0 - area, false};
  }
  return {gmd(mu) / denom, signed_support};
}

/// Pairwise tables of a would-be random vector (X, Y, Z): xy has rows X and
/// columns Y, yz rows Y and columns Z, xz rows X and columns Z.
struct TripleTables {
  JointDiscrete xy;
  JointDiscrete yz;
  JointDiscrete xz;

  TripleTables(JointDiscrete xy_, JointDiscrete yz_, JointDiscrete xz_)
      : xy(std::move(xy_)), yz(std::move(yz_)), xz(std::move(xz_)) {
    check(xy.x_support(), row_sums(xy), xz.x_support(), row_sums(xz), "X");
    check(xy.y_support(), col_sums(xy), yz.x_support(), row_sums(yz), "Y");
    check(yz.y_support(), col_sums(yz), xz.y_support(), col_sums(xz), "Z");
  }

  UnivariateDist x() const { return Discrete(xy.x_support(), row_sums(xy)); }
  UnivariateDist y() const { return Discrete(xy.y_support(), col_sums(xy)); }
  UnivariateDist z() const { return Discrete(yz.y_support(), col_sums(yz)); }

 private:
  static void check(const std::vector<double>& s1, const std::vector<double>& w1, const std::vector<double>& s2,
                    const std::vector<double>& w2, const char* name) {
    if (s1 != s2) throw std::invalid_argument(std::string("triple: supports of ") + name + " differ between tables");
    for (std::size_t i = 0; i < w1.size(); ++i)
      if (std::abs(w1[i] - w2[i]) > 1e-9)
        throw std::invalid_argument(std::string("triple: marginals of ") + name + " differ between tables");
  }
};

struct TriangleReport {
  double lhs;          // D_norm(X, Z)
  double rhs;          // D_norm(X, Y) + D_norm(Y, Z)
  double slack;        // rhs - lhs
  double combination;  // (E|X-Y| + E|Y-Z| - E|X-Z|) / 2
  bool holds;
};

inline TriangleReport check_triangle_dnorm(const TripleTables& t) {
  const double ex = mean_abs(t.x()), ey = mean_abs(t.y()), ez = mean_abs(t.z());
  if (!(ex + ey > 0.0) || !(ey + ez > 0.0) || !(ex + ez > 0.0))
    throw std::domain_error("check_triangle_dnorm: zero denominator E|.| + E|.|");
  const double dxy = eabs_joint(t.xy), dyz = eabs_joint(t.yz), dxz = eabs_joint(t.xz);
  TriangleReport r{};
  r.lhs = d_norm(dxz, ex, ez);
  r.rhs = d_norm(dxy, ex, ey) + d_norm(dyz, ey, ez);
  r.slack = r.rhs - r.lhs;
  r.combination = (dxy + dyz - dxz) / 2.0;
  r.holds = r.slack >= -1e-12;
  return r;
}

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Eigenvalues of a symmetric 3x3 matrix in ascending order (trigonometric
/// solution of the characteristic cubic).
inline std::array<double, 3> symmetric_eigenvalues(const Matrix3& a) {
  const double p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
  std::array<double, 3> ev{};
  if (p1 == 0.0) {
    ev = {a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
  }
  const double q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
  const double p2 = (a[0][0] - q) * (a[0][0] - q) + (a[1][1] - q) * (a[1][1] - q) + (a[2][2] - q) * (a[2][2] - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Matrix3 b{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b[i][j] = (a[i][j] - (i == j ? q : 0.0)) / p;
  const double det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                     b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double hi = q + 2.0 * p * std::cos(phi);
  const double lo = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  ev = {lo, 3.0 * q - hi - lo, hi};
  std::sort(ev.begin(), ev.end());
  return ev;
}

struct ConsistencyReport {
  Matrix3 cov_matrix;
  std::array<double, 3> eigenvalues;
  bool consistent;
};

inline double covariance(const JointDiscrete& j) {
  const auto [mx, my] = center(j);
  return j.expect([mx = mx, my = my](double x, double y) { return (x - mx) * (y - my); });
}

/// Covariance matrix of (X, Y, Z) assembled from the pairwise tables, and
/// whether it is positive semidefinite (smallest eigenvalue >= -1e-9).
inline ConsistencyReport consistency_rule(const TripleTables& t) {
  auto var = [](const UnivariateDist& d) {
    const Discrete dd = to_discrete(d);
    const double m = mean(d);
    double s = 0.0;
    for (std::size_t i = 0; i < dd.size(); ++i) s += (dd.points()[i] - m) * (dd.points()[i] - m) * dd.weights()[i];
    return s;
  };
  const double cxy = covariance(t.xy), cyz = covariance(t.yz), cxz = covariance(t.xz);
  ConsistencyReport r{};
  r.cov_matrix = {{{var(t.x()), cxy, cxz}, {cxy, var(t.y()), cyz}, {cxz, cyz, var(t.z())}}};
  r.eigenvalues = symmetric_eigenvalues(r.cov_matrix);
  r.consistent = r.eigenvalues[0] >= -1e-9;
  return r;
}

struct EtaPInput {
  JointDiscrete pi1;
  JointDiscrete pi2;
  double p;
};

/// ||C(pi1) - C(pi2)|| + |(E|X1-Y1|^p)^(1/p) - (E|X2-Y2|^p)^(1/p)|, C the center (E X, E Y).
inline double eta_p(const EtaPInput& in) {
  if (!(in.p >= 1.0)) throw std::domain_error("eta_p: p must be >= 1");
  const auto [x1, y1] = center(in.pi1);
  const auto [x2, y2] = center(in.pi2);
  const double m1 = std::pow(abs_moment(in.pi1, in.p), 1.0 / in.p);
  const double m2 = std::pow(abs_moment(in.pi2, in.p), 1.0 / in.p);
  return std::hypot(x1 - x2, y1 - y2) + std::abs(m1 - m2);
}

/// The four distances of the quadrilateral inequality
/// |psi(X,Y) - psi(X1,Y1)| <= psi(X,X1) + psi(Y,Y1).
struct Quadrilateral {
  double xy;
  double x1y1;
  double xx1;
  double yy1;
};

inline bool quadrilateral_check(const Quadrilateral& q, double tol = 1e-12) {
  return std::abs(q.xy - q.x1y1) <= q.xx1 + q.yy1 + tol;
}

/// Same check with each distance taken as E|.-.| of the corresponding table.
inline bool quadrilateral_check(const JointDiscrete& xy, const JointDiscrete& x1y1, const JointDiscrete& xx1,
                                const JointDiscrete& yy1, double tol = 1e-12) {
  return quadrilateral_check({eabs_joint(xy), eabs_joint(x1y1), eabs_joint(xx1), eabs_joint(yy1)}, tol);
}

}  // namespace l1metrics
