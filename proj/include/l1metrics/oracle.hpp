#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "l1metrics/abs_diff.hpp"
#include "l1metrics/distributions.hpp"
#include "l1metrics/quadrature.hpp"
#include "l1metrics/rng.hpp"

namespace l1metrics {

struct MCEstimate {
  double mean;
  double std_error;  // sample standard deviation / sqrt(n)
  std::uint64_t n;
  std::uint64_t seed;
};

namespace detail {

inline constexpr std::uint64_t kChunkSize = 65536;

struct Moments {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double v) {
    ++n;
    const double d = v - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (v - mean);
  }
  // Chan et al. pairwise update.
  void merge(const Moments& o) {
    if (o.n == 0) return;
    if (n == 0) { *this = o; return; }
    const double na = static_cast<double>(n), nb = static_cast<double>(o.n);
    const double d = o.mean - mean;
    const double tot = na + nb;
    mean += d * nb / tot;
    m2 += o.m2 + d * d * na * nb / tot;
    n += o.n;
  }
};

// Runs sample_chunk(rng, count) for every chunk, each with its own derived
// stream, and merges the chunk moments in chunk order so the result does not
// depend on how chunks were scheduled.
template <class ChunkFn>
MCEstimate run_chunks(std::uint64_t n, std::uint64_t seed, ChunkFn&& sample_chunk) {
  if (n < 2) throw std::invalid_argument("monte carlo: n must be >= 2");
  const std::uint64_t chunks = (n + kChunkSize - 1) / kChunkSize;
  std::vector<Moments> parts(chunks);
  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t c = first; c < chunks; c += stride) {
      Rng rng = Rng::derive(seed, c);
      const std::uint64_t count = std::min(kChunkSize, n - c * kChunkSize);
      parts[c] = sample_chunk(rng, count);
    }
  };
  const std::uint64_t threads = std::min<std::uint64_t>(std::max(1u, std::thread::hardware_concurrency()), chunks);
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }
  Moments total;
  for (const auto& p : parts) total.merge(p);
  const double sd = std::sqrt(total.m2 / static_cast<double>(total.n - 1));
  return {total.mean, sd / std::sqrt(static_cast<double>(total.n)), total.n, seed};
}

}  // namespace detail

/// Plain Monte Carlo estimate of E|X - Y| from n inversion-sampled independent pairs.
inline MCEstimate mc_eabs(const IndependentPair& p, std::uint64_t n, std::uint64_t seed) {
  return detail::run_chunks(n, seed, [&p](Rng& rng, std::uint64_t count) {
    detail::Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double x = draw(p.x, rng);
      const double y = draw(p.y, rng);
      m.push(std::abs(x - y));
    }
    return m;
  });
}

/// Monte Carlo estimate of E|X - Y| for a bivariate normal pair with correlation rho,
/// sampled as (Z1, rho Z1 + sqrt(1 - rho^2) Z2).
inline MCEstimate mc_eabs_correlated_gaussian(double mu_x, double sigma_x, double mu_y, double sigma_y, double rho,
                                              std::uint64_t n, std::uint64_t seed) {
  if (!(std::abs(rho) < 1.0)) throw std::domain_error("mc_eabs_correlated_gaussian: |rho| must be < 1");
  const double r2 = std::sqrt(1.0 - rho * rho);
  return detail::run_chunks(n, seed, [=](Rng& rng, std::uint64_t count) {
    detail::Moments m;
    for (std::uint64_t i = 0; i < count; ++i) {
      const double z1 = normal_quantile(rng.uniform_open());
      const double z2 = normal_quantile(rng.uniform_open());
      const double x = mu_x + sigma_x * z1;
      const double y = mu_y + sigma_y * (rho * z1 + r2 * z2);
      m.push(std::abs(x - y));
    }
    return m;
  });
}

/// Double integral of |x - y| f(x) g(y) by nested Gauss-Kronrod; the inner
/// integral is split at y = x.
inline double quad_eabs(const IndependentPair& p, double tol = 1e-10) {
  if (!is_continuous(p.x) || !is_continuous(p.y)) throw std::invalid_argument("quad_eabs: requires gaussian or uniform components");
  const auto [xlo, xhi] = detail::integration_range(p.x);
  const auto [ylo, yhi] = detail::integration_range(p.y);
  auto inner = [&](double x) {
    const auto cells = quad::make_cells(ylo, yhi, {x});
    return quad::integrate_cells([&](double y) { return std::abs(x - y) * density(p.y, y); }, cells, tol);
  };
  std::vector<double> outer_breaks{ylo, yhi};
  if (const auto* g = p.x.get_if<Gaussian>()) outer_breaks.push_back(g->mu);
  const auto cells = quad::make_cells(xlo, xhi, outer_breaks);
  return quad::integrate_cells([&](double x) { return density(p.x, x) * inner(x); }, cells, tol);
}

}  // namespace l1metrics
