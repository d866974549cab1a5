#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace l1metrics::quad {

inline constexpr double kDefaultTolerance = 1e-12;
inline constexpr double kAbsoluteTolerance = 1e-15;  // per unit length
inline constexpr unsigned kMaxDepth = 18;
inline constexpr double kNoiseFloor = 1e-14;

namespace detail {
struct Piece {
  double value;
  double error;
};

template <class F>
Piece gk61(F& f, double a, double b) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0, 0.0, &err);
  return {v, err};
}

// Bisects until the error estimate meets the tolerance. Once the estimate is down
// at rounding level and splitting stops paying off (children's error not below half
// the parent's for three levels in a row), the split sum is accepted.
template <class F>
double adapt(F& f, double a, double b, Piece p, double tol, double abs_per_unit, unsigned depth, int stalls) {
  if (depth == 0 || p.error <= std::max(tol * std::abs(p.value), abs_per_unit * (b - a))) return p.value;
  const double m = 0.5 * (a + b);
  const Piece l = gk61(f, a, m), r = gk61(f, m, b);
  const bool noise = p.error <= kNoiseFloor * std::max(1.0, std::abs(p.value));
  stalls = noise && l.error + r.error > 0.5 * p.error ? stalls + 1 : 0;
  if (stalls >= 3) return l.value + r.value;
  return adapt(f, a, m, l, tol, abs_per_unit, depth - 1, stalls) + adapt(f, m, b, r, tol, abs_per_unit, depth - 1, stalls);
}
}  // namespace detail

/// Adaptive 61-point Gauss-Kronrod on a finite interval. A piece is accepted when its
/// error estimate is within `tol` relative or kAbsoluteTolerance per unit length, so
/// near-zero tails do not force refinement. Endpoints are never evaluated.
template <class F>
double integrate(F&& f, double a, double b, double tol = kDefaultTolerance) {
  if (!(b > a)) return 0.0;
  auto g = [&](double x) { return static_cast<double>(f(x)); };
  return detail::adapt(g, a, b, detail::gk61(g, a, b), tol, kAbsoluteTolerance, kMaxDepth, 0);
}

/// Sorted, de-duplicated breakpoints clipped to [lo, hi], with lo and hi included.
inline std::vector<double> make_cells(double lo, double hi, std::vector<double> interior) {
  std::vector<double> cells{lo};
  std::sort(interior.begin(), interior.end());
  for (double x : interior)
    if (x > lo && x < hi && x != cells.back()) cells.push_back(x);
  cells.push_back(hi);
  return cells;
}

/// Splits every cell at the sign changes of g found by sampling and bisection,
/// so that integrands like h(g(x)) are smooth inside each returned cell.
template <class G>
std::vector<double> split_at_sign_changes(G&& g, const std::vector<double>& cells, int samples_per_cell = 32) {
  std::vector<double> out{cells.front()};
  for (std::size_t k = 0; k + 1 < cells.size(); ++k) {
    const double a = cells[k];
    const double b = cells[k + 1];
    const double width = (b - a) / samples_per_cell;
    // Sample strictly inside the cell, since values at cell boundaries may sit on a
    // jump, but come close to both ends so crossings near an edge are not missed.
    const double edge = (b - a) * 1e-10;
    auto node = [&](int s) {
      if (s == 0) return a + edge;
      if (s == samples_per_cell + 1) return b - edge;
      return a + (s - 0.5) * width;
    };
    double x_prev = node(0);
    double g_prev = g(x_prev);
    for (int s = 1; s <= samples_per_cell + 1; ++s) {
      const double x = node(s);
      const double gx = g(x);
      if ((g_prev < 0.0 && gx > 0.0) || (g_prev > 0.0 && gx < 0.0)) {
        double lo = x_prev, hi = x, g_lo = g_prev;
        for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max(1.0, std::abs(lo)); ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = g(mid);
          if (gm == 0.0) { lo = hi = mid; break; }
          if ((gm < 0.0) == (g_lo < 0.0)) { lo = mid; g_lo = gm; } else { hi = mid; }
        }
        const double root = 0.5 * (lo + hi);
        if (root > out.back() && root < b) out.push_back(root);
      }
      x_prev = x;
      g_prev = gx;
    }
    if (b > out.back()) out.push_back(b);
  }
  return out;
}

/// Sum of integrals over consecutive cells.
template <class F>
double integrate_cells(F&& f, const std::vector<double>& cells, double tol = kDefaultTolerance) {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cells.size(); ++k) total += integrate(f, cells[k], cells[k + 1], tol);
  return total;
}

}  // namespace l1metrics::quad
