#include <gtest/gtest.h>

#include <cmath>

#include "support/generators.hpp"

using namespace l1metrics;

TEST(MonteCarlo, SameSeedSameBits) {
  const IndependentPair p{UnivariateDist::gaussian(0, 1), UnivariateDist::uniform(-1, 2)};
  const auto a = mc_eabs(p, 300000, 17), b = mc_eabs(p, 300000, 17);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_NE(a.mean, mc_eabs(p, 300000, 18).mean);
  EXPECT_EQ(a.n, 300000u);
  EXPECT_EQ(a.seed, 17u);
}

TEST(MonteCarlo, PointMassesHaveNoSpread) {
  const auto r = mc_eabs({UnivariateDist::dirac(1), UnivariateDist::dirac(-2.5)}, 1000, 1);
  EXPECT_EQ(r.mean, 3.5);
  EXPECT_EQ(r.std_error, 0.0);
}

TEST(MonteCarlo, IntervalCoverage) {
  // 95% intervals over 200 seeds; binomial(200, 0.95) is below 180 with probability < 1e-3
  const IndependentPair p{UnivariateDist::gaussian(0.5, 1), UnivariateDist::discrete({-1, 2}, {0.3, 0.7})};
  const double truth = eabs_product(p);
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = mc_eabs(p, 20000, seed);
    covered += std::abs(r.mean - truth) <= 1.96 * r.std_error;
  }
  EXPECT_GE(covered, 180);
}

TEST(MonteCarlo, CorrelatedGaussian) {
  const auto r = mc_eabs_correlated_gaussian(0, 1, 0.5, 2, 0.6, 400000, 3);
  EXPECT_NEAR(r.mean, gaussian_eabs_correlated(0, 1, 0.5, 2, 0.6), 5 * r.std_error);
  EXPECT_THROW(mc_eabs_correlated_gaussian(0, 1, 0, 1, -1, 10, 0), std::domain_error);
}

TEST(Quadrature, NestedMatchesClosedForms) {
  EXPECT_NEAR(quad_eabs({UnivariateDist::gaussian(0, 1), UnivariateDist::gaussian(1, 2)}), gaussian_eabs(0, 1, 1, 2), 1e-9);
  EXPECT_NEAR(quad_eabs({UnivariateDist::uniform(0, 1), UnivariateDist::uniform(0.5, 3)}), uniform_eabs({0, 1}, {0.5, 3}), 1e-10);
  EXPECT_NEAR(quad_eabs({UnivariateDist::gaussian(0, 1), UnivariateDist::uniform(-1, 1)}),
              eabs_product(UnivariateDist::gaussian(0, 1), UnivariateDist::uniform(-1, 1)), 1e-9);
  EXPECT_THROW(quad_eabs({UnivariateDist::dirac(0), UnivariateDist::gaussian(0, 1)}), std::invalid_argument);
}

TEST(Quadrature, ToleratesRoundingNoise) {
  // |F - G| near a crossing where both CDFs are close to 1
  const auto g = UnivariateDist::gaussian(-2.681921279587254, 2.5467413849627136);
  const auto u = UnivariateDist::uniform(3.9353218379738166, 6.96737759997539);
  EXPECT_NEAR(gk(g, u).value, gk_quantile(g, u).value, 1e-10);
  EXPECT_NEAR(quad::integrate([](double x) { return std::abs(x); }, -1, 2), 2.5, 1e-14);
}
