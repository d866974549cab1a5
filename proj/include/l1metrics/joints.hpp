#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "l1metrics/distributions.hpp"
#include "l1metrics/rng.hpp"

namespace l1metrics {

inline constexpr double kDefaultPredicateTolerance = 1e-9;

/// Finite bivariate probability table. Rows follow the x support, columns the y support.
class JointDiscrete {
 public:
  JointDiscrete(std::vector<double> xs, std::vector<double> ys, std::vector<std::vector<double>> prob)
      : xs_(std::move(xs)), ys_(std::move(ys)) {
    check_support(xs_, "x");
    check_support(ys_, "y");
    if (prob.size() != xs_.size()) throw std::invalid_argument("joint: row count differs from x support size");
    p_.reserve(xs_.size() * ys_.size());
    double total = 0.0;
    for (const auto& row : prob) {
      if (row.size() != ys_.size()) throw std::invalid_argument("joint: column count differs from y support size");
      for (double v : row) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("joint: probabilities must be non-negative");
        p_.push_back(v);
        total += v;
      }
    }
    const double defect = std::abs(total - 1.0);
    if (defect > kRenormalizeLimit) throw std::invalid_argument("joint: total mass is not 1");
    if (defect > kMassTolerance)
      for (double& v : p_) v /= total;
  }

  const std::vector<double>& x_support() const { return xs_; }
  const std::vector<double>& y_support() const { return ys_; }
  std::size_t rows() const { return xs_.size(); }
  std::size_t cols() const { return ys_.size(); }
  double at(std::size_t i, std::size_t j) const { return p_[i * ys_.size() + j]; }

  std::vector<std::vector<double>> matrix() const {
    std::vector<std::vector<double>> m(rows(), std::vector<double>(cols()));
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) m[i][j] = at(i, j);
    return m;
  }

  /// Same law with the roles of X and Y exchanged.
  JointDiscrete transposed() const {
    std::vector<std::vector<double>> m(cols(), std::vector<double>(rows()));
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) m[j][i] = at(i, j);
    return JointDiscrete(ys_, xs_, std::move(m));
  }

  /// Sum over cells of f(x, y) * p(x, y).
  template <class F>
  double expect(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols(); ++j) s += f(xs_[i], ys_[j]) * at(i, j);
    return s;
  }

  friend bool operator==(const JointDiscrete&, const JointDiscrete&) = default;

 private:
  static void check_support(const std::vector<double>& s, const char* axis) {
    if (s.empty()) throw std::invalid_argument(std::string("joint: empty ") + axis + " support");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (!std::isfinite(s[i])) throw std::invalid_argument(std::string("joint: non-finite ") + axis + " support value");
      if (i > 0 && !(s[i] > s[i - 1]))
        throw std::invalid_argument(std::string("joint: ") + axis + " support must be strictly increasing");
    }
  }

  std::vector<double> xs_;
  std::vector<double> ys_;
  std::vector<double> p_;
};

inline std::vector<double> row_sums(const JointDiscrete& j) {
  std::vector<double> r(j.rows(), 0.0);
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) r[i] += j.at(i, k);
  return r;
}

inline std::vector<double> col_sums(const JointDiscrete& j) {
  std::vector<double> c(j.cols(), 0.0);
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) c[k] += j.at(i, k);
  return c;
}

/// X and Y marginals as discrete laws; zero-mass support points are kept.
inline std::pair<UnivariateDist, UnivariateDist> marginals(const JointDiscrete& j) {
  return {Discrete(j.x_support(), row_sums(j)), Discrete(j.y_support(), col_sums(j))};
}

/// (E X, E Y).
inline std::pair<double, double> center(const JointDiscrete& j) {
  return {j.expect([](double x, double) { return x; }), j.expect([](double, double y) { return y; })};
}

/// E|X - Y|^p under the table.
inline double abs_moment(const JointDiscrete& j, double p) {
  return j.expect([p](double x, double y) { return std::pow(std::abs(x - y), p); });
}

/// mu (x) nu: prob[i][j] = mu.w[i] * nu.w[j]. Both laws must be atomic.
inline JointDiscrete product_coupling(const UnivariateDist& mu, const UnivariateDist& nu) {
  const Discrete a = to_discrete(mu);
  const Discrete b = to_discrete(nu);
  std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) m[i][k] = a.weights()[i] * b.weights()[k];
  return JointDiscrete(a.points(), b.points(), std::move(m));
}

/// Diagonal coupling of mu with itself: all mass on {(x, x)}.
inline JointDiscrete diagonal_coupling(const UnivariateDist& mu) {
  const Discrete a = to_discrete(mu);
  std::vector<std::vector<double>> m(a.size(), std::vector<double>(a.size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) m[i][i] = a.weights()[i];
  return JointDiscrete(a.points(), a.points(), std::move(m));
}

/// Quantile coupling of two atomic laws as a table: the image of Lebesgue
/// measure on (0,1] under t -> (F^-(t), G^-(t)).
inline JointDiscrete quantile_coupling(const UnivariateDist& mu, const UnivariateDist& nu) {
  const Discrete a = to_discrete(mu);
  const Discrete b = to_discrete(nu);
  std::vector<double> t{0.0};
  for (double c : a.cumulative()) t.push_back(c);
  for (double c : b.cumulative()) t.push_back(c);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  std::vector<std::vector<double>> m(a.size(), std::vector<double>(b.size(), 0.0));
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double mid = 0.5 * (t[k] + t[k + 1]);
    const auto i = static_cast<std::size_t>(std::lower_bound(a.cumulative().begin(), a.cumulative().end(), mid) - a.cumulative().begin());
    const auto j = static_cast<std::size_t>(std::lower_bound(b.cumulative().begin(), b.cumulative().end(), mid) - b.cumulative().begin());
    m[i][j] += t[k + 1] - t[k];
  }
  return JointDiscrete(a.points(), b.points(), std::move(m));
}

/// max |p_ij - p_i q_j| <= tol.
inline bool is_independent(const JointDiscrete& j, double tol = kDefaultPredicateTolerance) {
  const auto r = row_sums(j);
  const auto c = col_sums(j);
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k)
      if (std::abs(j.at(i, k) - r[i] * c[k]) > tol) return false;
  return true;
}

namespace detail {
// Rounds to 12 significant digits so that supports written with decimal literals compare equal.
inline double canonical(double v) {
  if (v == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return std::strtod(buf, nullptr);
}
}  // namespace detail

/// Probability mass on cells with x != y (after canonical rounding).
inline double off_diagonal_mass(const JointDiscrete& j) {
  double s = 0.0;
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k)
      if (detail::canonical(j.x_support()[i]) != detail::canonical(j.y_support()[k])) s += j.at(i, k);
  return s;
}

/// max over merged support values of |P(X = v) - P(Y = v)|.
inline double marginal_discrepancy(const JointDiscrete& j) {
  std::map<double, double> diff;
  const auto r = row_sums(j);
  const auto c = col_sums(j);
  for (std::size_t i = 0; i < j.rows(); ++i) diff[detail::canonical(j.x_support()[i])] += r[i];
  for (std::size_t k = 0; k < j.cols(); ++k) diff[detail::canonical(j.y_support()[k])] -= c[k];
  double worst = 0.0;
  for (const auto& [v, d] : diff) worst = std::max(worst, std::abs(d));
  return worst;
}

/// The six mutually exclusive categories of a pair by
/// (independence, almost-sure equality, equality in distribution).
enum class Category { A, B, C, D, E, F };

inline const char* to_string(Category c) {
  static constexpr const char* names[] = {"A", "B", "C", "D", "E", "F"};
  return names[static_cast<int>(c)];
}

struct CategoryPredicates {
  bool independent;
  bool almost_surely_equal;
  bool equal_in_distribution;
};

inline CategoryPredicates category_predicates(const JointDiscrete& j, double tol = kDefaultPredicateTolerance) {
  CategoryPredicates p{};
  p.independent = is_independent(j, tol);
  p.almost_surely_equal = off_diagonal_mass(j) <= tol;
  // a.s. equality forces equal marginals; keeps the partition total under tolerances
  p.equal_in_distribution = p.almost_surely_equal || marginal_discrepancy(j) <= tol;
  return p;
}

inline Category classify(const JointDiscrete& j, double tol = kDefaultPredicateTolerance) {
  const auto p = category_predicates(j, tol);
  if (p.almost_surely_equal) return p.independent ? Category::C : Category::A;
  if (p.equal_in_distribution) return p.independent ? Category::D : Category::B;
  return p.independent ? Category::E : Category::F;
}

namespace detail {
inline double plogp_sum(const std::vector<double>& ps) {
  double h = 0.0;
  for (double p : ps)
    if (p > 0.0) h -= p * std::log(p);
  return h;
}
}  // namespace detail

/// Joint entropy H(X,Y) in nats; 0 ln(1/0) = 0.
inline double entropy(const JointDiscrete& j) {
  std::vector<double> all;
  all.reserve(j.rows() * j.cols());
  for (std::size_t i = 0; i < j.rows(); ++i)
    for (std::size_t k = 0; k < j.cols(); ++k) all.push_back(j.at(i, k));
  return detail::plogp_sum(all);
}

/// Entropy of an atomic univariate law, in nats.
inline double entropy(const Discrete& d) { return detail::plogp_sum(d.weights()); }

/// I(X,Y) = H(X) + H(Y) - H(X,Y).
inline double mutual_information(const JointDiscrete& j) {
  return detail::plogp_sum(row_sums(j)) + detail::plogp_sum(col_sums(j)) - entropy(j);
}

/// A random element of the coupling set of (mu, nu): Sinkhorn scaling of a random
/// positive matrix to the target marginals.
inline JointDiscrete random_coupling(const UnivariateDist& mu, const UnivariateDist& nu, Rng& rng,
                                     int iterations = 200) {
  const Discrete a = to_discrete(mu);
  const Discrete b = to_discrete(nu);
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<double>> k(n, std::vector<double>(m));
  for (auto& row : k)
    for (double& v : row) v = std::pow(rng.uniform_open(), 3.0);  // skewed entries spread the samples
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (double v : k[i]) s += v;
      for (double& v : k[i]) v = s > 0.0 ? v * a.weights()[i] / s : 0.0;
    }
    for (std::size_t c = 0; c < m; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += k[i][c];
      for (std::size_t i = 0; i < n; ++i) k[i][c] = s > 0.0 ? k[i][c] * b.weights()[c] / s : 0.0;
    }
  }
  return JointDiscrete(a.points(), b.points(), std::move(k));
}

}  // namespace l1metrics
