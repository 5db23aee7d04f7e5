// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "recip/error.hpp"
#include "recip/stats.hpp"

namespace recip {
namespace {

TEST(Summarize, MeanVarianceStdError) {
  const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
  const auto s = summarize(x);
  EXPECT_EQ(s.n, 5u);
  EXPECT_DOUBLE_EQ(s.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.variance, 2.5);
  EXPECT_DOUBLE_EQ(s.std_error, std::sqrt(2.5 / 5.0));
  const std::vector<double> constant(7, 0.25);
  EXPECT_EQ(summarize(constant).variance, 0.0);
}

TEST(ChiSquare, KnownStatistic) {
  // Fair die, 60 rolls.
  const std::vector<std::int64_t> obs{5, 8, 9, 8, 10, 20};
  const std::vector<double> p(6, 1.0 / 6.0);
  const auto r = chi_square_gof(obs, p);
  EXPECT_NEAR(r.statistic, 13.4, 1e-12);
  EXPECT_EQ(r.dof, 5);
  EXPECT_NEAR(r.p_value, 0.019905220334774, 1e-9);
}

TEST(ChiSquare, PoolsSmallCells) {
  const std::vector<std::int64_t> obs{50, 45, 3, 1, 1};
  const std::vector<double> p{0.5, 0.46, 0.02, 0.01, 0.01};
  const auto r = chi_square_gof(obs, p);
  EXPECT_EQ(r.cells, 3u);
  EXPECT_EQ(r.dof, 2);
}

TEST(Kolmogorov, UniformSampleAndShiftedSample) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> x(20000);
  for (auto& v : x) v = u(gen);
  auto cdf = [](double t) { return std::clamp(t, 0.0, 1.0); };
  EXPECT_GT(ks_p_value(ks_statistic(x, cdf), x.size()), 0.001);
  for (auto& v : x) v = std::pow(v, 1.1);
  EXPECT_LT(ks_p_value(ks_statistic(x, cdf), x.size()), 0.001);
  // Asymptotic tail at sqrt(n) D = 1.36 is about 0.05.
  EXPECT_NEAR(ks_p_value(1.36 / std::sqrt(1e6), 1000000), 0.0494, 1e-3);
}

TEST(Wilson, CoversProportion) {
  const auto ci = wilson_interval(50, 100, 1.96);
  EXPECT_NEAR(ci.lo, 0.4038, 1e-4);
  EXPECT_NEAR(ci.hi, 0.5962, 1e-4);
  const auto zero = wilson_interval(0, 100, 4.0);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
}

}  // namespace
}  // namespace recip
