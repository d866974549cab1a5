#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "l1metrics/rng.hpp"
#include "l1metrics/special_functions.hpp"

namespace l1metrics {

inline constexpr double kMassTolerance = 1e-12;     // accepted as-is
inline constexpr double kRenormalizeLimit = 1e-9;   // renormalized silently up to this defect

/// Real number extended with -inf / +inf sentinels. Quantile functions return it
/// at t = 0 and t = 1; reading the value of a sentinel throws.
class ExtendedReal {
 public:
  enum class Kind { finite, neg_inf, pos_inf };

  constexpr ExtendedReal(double v) : kind_(Kind::finite), value_(v) {}  // NOLINT(implicit)
  static constexpr ExtendedReal neg_infinity() { return ExtendedReal(Kind::neg_inf); }
  static constexpr ExtendedReal pos_infinity() { return ExtendedReal(Kind::pos_inf); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_finite() const { return kind_ == Kind::finite; }

  double value() const {
    if (kind_ != Kind::finite) throw std::domain_error("arithmetic on an infinite quantile sentinel");
    return value_;
  }

  /// Value with sentinels mapped to IEEE infinities, for ordering and export only.
  constexpr double as_ieee() const {
    switch (kind_) {
      case Kind::neg_inf: return -std::numeric_limits<double>::infinity();
      case Kind::pos_inf: return std::numeric_limits<double>::infinity();
      default: return value_;
    }
  }

  friend constexpr bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.kind_ == b.kind_ && (a.kind_ != Kind::finite || a.value_ == b.value_);
  }
  friend constexpr std::partial_ordering operator<=>(const ExtendedReal& a, const ExtendedReal& b) {
    return a.as_ieee() <=> b.as_ieee();
  }

 private:
  constexpr explicit ExtendedReal(Kind k) : kind_(k), value_(0.0) {}
  Kind kind_;
  double value_;
};

/// Finite discrete law on strictly increasing support points.
class Discrete {
 public:
  Discrete(std::vector<double> points, std::vector<double> weights) : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty()) throw std::invalid_argument("discrete: empty support");
    if (points_.size() != weights_.size()) throw std::invalid_argument("discrete: points and weights differ in length");
    double total = 0.0;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!std::isfinite(points_[i])) throw std::invalid_argument("discrete: non-finite support point");
      if (i > 0 && !(points_[i] > points_[i - 1])) throw std::invalid_argument("discrete: points must be strictly increasing");
      if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) throw std::invalid_argument("discrete: weights must be non-negative");
      total += weights_[i];
    }
    const double defect = std::abs(total - 1.0);
    if (defect > kRenormalizeLimit) throw std::invalid_argument("discrete: weights do not sum to 1");
    if (defect > kMassTolerance)
      for (double& w : weights_) w /= total;

    cumulative_.resize(weights_.size());
    double run = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      run += weights_[i];
      cumulative_[i] = std::min(run, 1.0);
      if (weights_[i] > 0.0) last_positive = i;
    }
    for (std::size_t i = last_positive; i < cumulative_.size(); ++i) cumulative_[i] = 1.0;
  }

  /// Empirical law of a sample; repeated values are merged.
  static Discrete empirical(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("empirical: no values");
    std::map<double, double> counts;
    for (double v : values) counts[v] += 1.0;
    std::vector<double> pts, ws;
    for (auto [v, c] : counts) {
      pts.push_back(v);
      ws.push_back(c / static_cast<double>(values.size()));
    }
    return Discrete(std::move(pts), std::move(ws));
  }

  const std::vector<double>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }
  /// cumulative()[i] = F(points()[i]); the last positive-weight entry is exactly 1.
  const std::vector<double>& cumulative() const { return cumulative_; }
  std::size_t size() const { return points_.size(); }

  friend bool operator==(const Discrete& a, const Discrete& b) {
    return a.points_ == b.points_ && a.weights_ == b.weights_;
  }

 private:
  std::vector<double> points_;
  std::vector<double> weights_;
  std::vector<double> cumulative_;
};

struct Gaussian {
  double mu;
  double sigma;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

/// Continuous uniform law on [a, b], a < b.
struct Uniform {
  double a;
  double b;
  double length() const { return b - a; }
  double midpoint() const { return 0.5 * (a + b); }
  friend bool operator==(const Uniform&, const Uniform&) = default;
};

struct Dirac {
  double c;
  friend bool operator==(const Dirac&, const Dirac&) = default;
};

/// Tagged univariate law: finite discrete, Gaussian, uniform interval or point mass.
class UnivariateDist {
 public:
  using Variant = std::variant<Discrete, Gaussian, Uniform, Dirac>;

  UnivariateDist(Discrete d) : v_(std::move(d)) {}  // NOLINT(implicit)
  UnivariateDist(Gaussian g) : v_(g) {              // NOLINT(implicit)
    if (!std::isfinite(g.mu)) throw std::invalid_argument("gaussian: mu must be finite");
    if (!(g.sigma > 0.0) || !std::isfinite(g.sigma))
      throw std::invalid_argument("gaussian: sigma must be > 0 (use dirac for a degenerate law)");
  }
  UnivariateDist(Uniform u) : v_(u) {  // NOLINT(implicit)
    if (!std::isfinite(u.a) || !std::isfinite(u.b)) throw std::invalid_argument("uniform: bounds must be finite");
    if (!(u.a < u.b)) throw std::invalid_argument("uniform: requires a < b (use dirac for a degenerate interval)");
  }
  UnivariateDist(Dirac d) : v_(d) {  // NOLINT(implicit)
    if (!std::isfinite(d.c)) throw std::invalid_argument("dirac: location must be finite");
  }

  static UnivariateDist discrete(std::vector<double> points, std::vector<double> weights) {
    return Discrete(std::move(points), std::move(weights));
  }
  static UnivariateDist gaussian(double mu, double sigma) { return Gaussian{mu, sigma}; }
  static UnivariateDist uniform(double a, double b) { return Uniform{a, b}; }
  static UnivariateDist dirac(double c) { return Dirac{c}; }

  const Variant& variant() const { return v_; }
  template <class T> const T* get_if() const { return std::get_if<T>(&v_); }
  template <class T> bool is() const { return std::holds_alternative<T>(v_); }

  template <class Visitor> decltype(auto) visit(Visitor&& vis) const { return std::visit(std::forward<Visitor>(vis), v_); }

  friend bool operator==(const UnivariateDist&, const UnivariateDist&) = default;

 private:
  Variant v_;
};

template <class... Ts> struct overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> overloaded(Ts...) -> overloaded<Ts...>;

inline std::string family_name(const UnivariateDist& d) {
  return d.visit(overloaded{[](const Discrete&) { return std::string("discrete"); },
                            [](const Gaussian&) { return std::string("gaussian"); },
                            [](const Uniform&) { return std::string("uniform"); },
                            [](const Dirac&) { return std::string("dirac"); }});
}

/// True for families with a continuous CDF (Gaussian, Uniform).
inline bool is_continuous(const UnivariateDist& d) { return d.is<Gaussian>() || d.is<Uniform>(); }

/// True for purely atomic families (Discrete, Dirac).
inline bool is_atomic(const UnivariateDist& d) { return !is_continuous(d); }

/// Atomic law as an explicit Discrete (Dirac becomes a single atom).
inline Discrete to_discrete(const UnivariateDist& d) {
  if (const auto* disc = d.get_if<Discrete>()) return *disc;
  if (const auto* dirac = d.get_if<Dirac>()) return Discrete({dirac->c}, {1.0});
  throw std::invalid_argument("to_discrete: " + family_name(d) + " is not atomic");
}

/// P(X <= x); right-continuous.
inline double cdf(const UnivariateDist& d, double x) {
  return d.visit(overloaded{
      [x](const Discrete& dd) {
        const auto& pts = dd.points();
        auto it = std::upper_bound(pts.begin(), pts.end(), x);
        if (it == pts.begin()) return 0.0;
        return dd.cumulative()[static_cast<std::size_t>(it - pts.begin()) - 1];
      },
      [x](const Gaussian& g) { return normal_cdf((x - g.mu) / g.sigma); },
      [x](const Uniform& u) {
        if (x <= u.a) return 0.0;
        if (x >= u.b) return 1.0;
        return (x - u.a) / u.length();
      },
      [x](const Dirac& dr) { return x < dr.c ? 0.0 : 1.0; }});
}

/// P(X < x), the left limit of the CDF.
inline double cdf_left(const UnivariateDist& d, double x) {
  return d.visit(overloaded{
      [x](const Discrete& dd) {
        const auto& pts = dd.points();
        auto it = std::lower_bound(pts.begin(), pts.end(), x);
        if (it == pts.begin()) return 0.0;
        return dd.cumulative()[static_cast<std::size_t>(it - pts.begin()) - 1];
      },
      [&d, x](const Gaussian&) { return cdf(d, x); },
      [&d, x](const Uniform&) { return cdf(d, x); },
      [x](const Dirac& dr) { return x <= dr.c ? 0.0 : 1.0; }});
}

namespace detail {
inline void check_probability(double t, const char* who) {
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error(std::string(who) + ": probability outside [0,1]");
}
}  // namespace detail

/// Lower generalized inverse F^-(t) = inf{x : F(x) >= t}. F^-(0) = -inf.
inline ExtendedReal quantile_minus(const UnivariateDist& d, double t) {
  detail::check_probability(t, "quantile_minus");
  if (t == 0.0) return ExtendedReal::neg_infinity();
  return d.visit(overloaded{
      [t](const Discrete& dd) -> ExtendedReal {
        const auto& cum = dd.cumulative();
        auto it = std::lower_bound(cum.begin(), cum.end(), t);
        return dd.points()[static_cast<std::size_t>(it - cum.begin())];
      },
      [t](const Gaussian& g) -> ExtendedReal {
        if (t == 1.0) return ExtendedReal::pos_infinity();
        return g.mu + g.sigma * normal_quantile(t);
      },
      [t](const Uniform& u) -> ExtendedReal { return t == 1.0 ? u.b : u.a + t * u.length(); },
      [](const Dirac& dr) -> ExtendedReal { return dr.c; }});
}

/// Upper generalized inverse F^+(t) = sup{x : F(x) <= t}. F^+(1) = +inf.
inline ExtendedReal quantile_plus(const UnivariateDist& d, double t) {
  detail::check_probability(t, "quantile_plus");
  if (t == 1.0) return ExtendedReal::pos_infinity();
  return d.visit(overloaded{
      [t](const Discrete& dd) -> ExtendedReal {
        const auto& cum = dd.cumulative();
        auto it = std::upper_bound(cum.begin(), cum.end(), t);
        return dd.points()[static_cast<std::size_t>(it - cum.begin())];
      },
      [t](const Gaussian& g) -> ExtendedReal {
        if (t == 0.0) return ExtendedReal::neg_infinity();
        return g.mu + g.sigma * normal_quantile(t);
      },
      [t](const Uniform& u) -> ExtendedReal { return u.a + t * u.length(); },
      [](const Dirac& dr) -> ExtendedReal { return dr.c; }});
}

/// Convenience: F^-(t) as a double for t in (0,1). Throws at the sentinels.
inline double quantile(const UnivariateDist& d, double t) { return quantile_minus(d, t).value(); }

inline double mean(const UnivariateDist& d) {
  return d.visit(overloaded{[](const Discrete& dd) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < dd.size(); ++i) s += dd.points()[i] * dd.weights()[i];
                              return s;
                            },
                            [](const Gaussian& g) { return g.mu; },
                            [](const Uniform& u) { return u.midpoint(); },
                            [](const Dirac& dr) { return dr.c; }});
}

/// E|X - b| for X ~ N(mu, sigma^2), sigma >= 0 (sigma = 0 is the point mass at mu).
inline double gaussian_point_eabs(double mu, double sigma, double b) {
  if (sigma < 0.0) throw std::domain_error("gaussian_point_eabs: negative sigma");
  const double d = std::abs(mu - b);
  if (sigma == 0.0) return d;
  const double z = d / sigma;
  return d * std::erf(z / std::numbers::sqrt2) + 2.0 * sigma * normal_pdf(z);
}

/// E|X - b| for X ~ U([a1, a2]).
inline double uniform_point_abs(double a1, double a2, double b) {
  const double len = a2 - a1;
  if (b >= a1 && b <= a2) return ((b - a1) * (b - a1) + (a2 - b) * (a2 - b)) / (2.0 * len);
  return std::abs(b - 0.5 * (a1 + a2));
}

/// E|X| in closed form per family.
inline double mean_abs(const UnivariateDist& d) {
  return d.visit(overloaded{[](const Discrete& dd) {
                              double s = 0.0;
                              for (std::size_t i = 0; i < dd.size(); ++i) s += std::abs(dd.points()[i]) * dd.weights()[i];
                              return s;
                            },
                            [](const Gaussian& g) { return gaussian_point_eabs(g.mu, g.sigma, 0.0); },
                            // (a1^2 + a2^2) / (2 L) when 0 lies in [a1, a2], else |midpoint|
                            [](const Uniform& u) { return uniform_point_abs(u.a, u.b, 0.0); },
                            [](const Dirac& dr) { return std::abs(dr.c); }});
}

/// Density of a continuous family. Atomic laws have none.
inline double density(const UnivariateDist& d, double x) {
  if (const auto* g = d.get_if<Gaussian>()) return normal_pdf((x - g->mu) / g->sigma) / g->sigma;
  if (const auto* u = d.get_if<Uniform>()) return (x >= u->a && x <= u->b) ? 1.0 / u->length() : 0.0;
  throw std::invalid_argument("density: " + family_name(d) + " law has no density");
}

/// Cumulative levels in (0,1) at which F^- jumps (empty for continuous families).
inline std::vector<double> quantile_jump_levels(const UnivariateDist& d) {
  std::vector<double> out;
  if (const auto* dd = d.get_if<Discrete>())
    for (double c : dd->cumulative())
      if (c > 0.0 && c < 1.0 && (out.empty() || c != out.back())) out.push_back(c);
  return out;
}

/// Points of discontinuity of F, or the ends of the support for the uniform family.
inline std::vector<double> cdf_breakpoints(const UnivariateDist& d) {
  return d.visit(overloaded{[](const Discrete& dd) { return dd.points(); },
                            [](const Gaussian&) { return std::vector<double>{}; },
                            [](const Uniform& u) { return std::vector<double>{u.a, u.b}; },
                            [](const Dirac& dr) { return std::vector<double>{dr.c}; }});
}

/// A finite range holding all but `tail` probability mass on each side.
inline std::pair<double, double> effective_support(const UnivariateDist& d, double tail = 1e-12) {
  return d.visit(overloaded{[](const Discrete& dd) { return std::pair{dd.points().front(), dd.points().back()}; },
                            [tail](const Gaussian& g) {
                              const double z = -normal_quantile(tail);
                              return std::pair{g.mu - z * g.sigma, g.mu + z * g.sigma};
                            },
                            [](const Uniform& u) { return std::pair{u.a, u.b}; },
                            [](const Dirac& dr) { return std::pair{dr.c, dr.c}; }});
}

/// One draw by inversion: a uniform variate pushed through F^-.
inline double draw(const UnivariateDist& d, Rng& rng) {
  if (const auto* dr = d.get_if<Dirac>()) return dr->c;
  return quantile_minus(d, rng.uniform_open()).value();
}

/// n i.i.d. draws by inversion; deterministic given the generator state.
inline std::vector<double> sample(const UnivariateDist& d, Rng& rng, std::size_t n) {
  std::vector<double> out(n);
  for (auto& x : out) x = draw(d, rng);
  return out;
}

}  // namespace l1metrics
