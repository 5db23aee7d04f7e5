// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "recip/error.hpp"
#include "recip/io.hpp"
#include "recip/latcore.hpp"
#include "recip/poisson.hpp"
#include "test_util.hpp"

namespace recip {
namespace {

using test::lv;

TEST(KernelBasis, PlusMinusOne) {
  const auto b = kernel_basis(test::pm1());
  ASSERT_EQ(b.rank(), 1u);
  EXPECT_EQ(b.vectors()[0], lv({1, 1}));
}

TEST(KernelBasis, SingleJumpHasRankZero) {
  const auto b = kernel_basis(JumpModel::from_integer_columns({{1}}));
  EXPECT_EQ(b.rank(), 0u);
}

TEST(KernelBasis, ThreeFourFive) {
  const auto b = kernel_basis(test::m345());
  ASSERT_EQ(b.rank(), 2u);
  EXPECT_EQ(b.vectors()[0], lv({1, 3, -3}));
  EXPECT_EQ(b.vectors()[1], lv({0, 5, -4}));
  for (const auto& v : {lv({-3, 1, 1}), lv({1, -2, 1}), lv({2, 1, -2})}) EXPECT_TRUE(b.contains(v));
  // Coordinates found by exhaustive search over |z| <= 10.
  EXPECT_EQ(*b.hnf_coordinates(lv({-3, 1, 1})), (std::vector<Integer>{-3, 2}));
  EXPECT_EQ(*b.hnf_coordinates(lv({1, -2, 1})), (std::vector<Integer>{1, -1}));
  EXPECT_EQ(*b.hnf_coordinates(lv({2, 1, -2})), (std::vector<Integer>{2, -1}));
  EXPECT_EQ(*b.hnf_coordinates(lv({-2, -1, 2})), (std::vector<Integer>{-2, 1}));
}

TEST(KernelBasis, HexagonMatchesFourProductLattice) {
  const auto model = io::model_from_json(io::load_json_file(test::data_path("hex.json")));
  const auto b = kernel_basis(model);
  EXPECT_EQ(b.rank(), 4u);
  const LatticeBasis expected(6, {lv({1, 0, 0, 1, 0, 0}), lv({0, 1, 0, 0, 1, 0}), lv({1, 0, 1, 0, 1, 0}),
                                  lv({0, 1, 0, 1, 0, 1})});
  EXPECT_TRUE(b.same_lattice(expected));
  for (const auto& v : expected.vectors()) EXPECT_TRUE(b.contains(v));
  for (const auto& v : b.vectors()) EXPECT_TRUE(expected.contains(v));
}

TEST(JumpModel, RejectsBadInput) {
  EXPECT_THROW(JumpModel::from_integer_columns({{0}, {1}}), InputError);
  EXPECT_THROW(JumpModel::from_integer_columns({{1}, {1}}), InputError);
  Layer l{"2", 2.0, {{Rational(1), Rational(2)}}};
  EXPECT_THROW(JumpModel(1, 2, {l}), InputError);
}

TEST(InKernel, Examples) {
  EXPECT_TRUE(in_kernel(test::m345(), lv({-3, 1, 1})));
  EXPECT_TRUE(in_kernel(test::m345(), lv({0, 0, 0})));
  EXPECT_FALSE(in_kernel(test::m345(), lv({1, 0, 0})));
}

TEST(InLattice, Examples) {
  const LatticeBasis b(2, {lv({1, 1})});
  EXPECT_TRUE(in_lattice(b, lv({3, 3})));
  EXPECT_FALSE(in_lattice(b, lv({1, 0})));
  EXPECT_TRUE(in_lattice(kernel_basis(test::m345()), lv({-2, -1, 2})));
}

TEST(ShiftDensityG, Examples) {
  const CountVector n23{2, 3};
  EXPECT_EQ(shift_density_G(lv({1, 1}), n23), Rational(6));
  EXPECT_EQ(shift_density_G(lv({1, -1}), n23), Rational(1, 2));
  EXPECT_EQ(shift_density_G(lv({0, 0}), n23), Rational(1));
  EXPECT_EQ(shift_density_G(lv({2, 0}), CountVector{1, 5}), Rational(0));
}

TEST(FiberPoints, ThreeFourFiveFiberOf612) {
  const auto pts = fiber_points(test::m345(), {6, 1, 2}, {11, 8, 7});
  const std::vector<CountVector> expected = {{0, 3, 4}, {0, 8, 0}, {1, 1, 5}, {1, 6, 1}, {2, 4, 2}, {3, 2, 3},
                                             {4, 0, 4}, {4, 5, 0}, {5, 3, 1}, {6, 1, 2}, {8, 2, 0}, {9, 0, 1}};
  EXPECT_EQ(pts, expected);
  EXPECT_EQ(default_box(test::m345(), {6, 1, 2}), (CountVector{10, 8, 6}));
}

TEST(FiberPoints, RankZeroAndDiagonal) {
  const auto single = JumpModel::from_integer_columns({{1}});
  EXPECT_EQ(fiber_points(single, {4}, {10}), (std::vector<CountVector>{{4}}));
  EXPECT_EQ(fiber_points(test::pm1(), {0, 0}, {3, 3}), (std::vector<CountVector>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
}

TEST(FiberPoints, LargeBoxUsesWalk) {
  // Box volume above the scan limit forces the echelon walk.
  const auto model = JumpModel::from_integer_columns({{3}, {4}, {5}, {7}});
  const CountVector box{400, 300, 240, 170};
  const auto pts = fiber_points(model, {20, 30, 40, 50}, box);
  std::size_t brute = 0;
  const long target = 3 * 20 + 4 * 30 + 5 * 40 + 7 * 50;
  for (long c = 0; c <= 240; ++c)
    for (long d = 0; d <= 170; ++d)
      for (long b = 0; b <= 300; ++b) {
        const long rest = target - 5 * c - 7 * d - 4 * b;
        if (rest >= 0 && rest % 3 == 0 && rest / 3 <= 400) ++brute;
      }
  EXPECT_EQ(pts.size(), brute);
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
}

// Random single-layer models with small integer columns.
JumpModel random_model(std::mt19937_64& gen, std::size_t d, std::size_t a) {
  std::uniform_int_distribution<long> entry(-4, 4);
  for (;;) {
    std::vector<std::vector<std::int64_t>> cols(a, std::vector<std::int64_t>(d));
    for (auto& c : cols)
      for (auto& x : c) x = entry(gen);
    try {
      return JumpModel::from_integer_columns(cols);
    } catch (const InputError&) {
    }
  }
}

TEST(KernelProperties, BasisInKernelAndRankNullity) {
  std::mt19937_64 gen(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t d = 1 + gen() % 3, a = 1 + gen() % 5;
    const auto model = random_model(gen, d, a);
    const auto b = kernel_basis(model);
    for (const auto& v : b.vectors()) EXPECT_TRUE(in_kernel(model, v));
    EXPECT_EQ(b.rank() + rational_rank(model.stacked()), a);
  }
}

TEST(KernelProperties, GMatchesPoissonRatio) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> rate(0.2, 3.0);
  std::uniform_int_distribution<int> count(0, 6), shift(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t a = 1 + gen() % 3;
    std::vector<double> lambda(a);
    CountVector n(a);
    LatticeVector c(a);
    bool ok = true;
    for (std::size_t j = 0; j < a; ++j) {
      lambda[j] = rate(gen);
      n[j] = count(gen);
      c[j] = shift(gen);
      ok = ok && n[j] - c[j].get_si() >= 0;
    }
    if (!ok) continue;
    CountVector down(a);
    for (std::size_t j = 0; j < a; ++j) down[j] = n[j] - c[j].get_si();
    const double ratio = pois_pmf(lambda, down) / pois_pmf(lambda, n) * std::exp(log_lambda_power(lambda, c));
    EXPECT_NEAR(shift_density_G(c, n).get_d(), ratio, 1e-9 * std::max(1.0, ratio));
  }
}

TEST(KernelProperties, FiberClosedUnderLatticeDifferences) {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 60; ++trial) {
    const auto model = random_model(gen, 1 + gen() % 2, 3 + gen() % 2);
    const auto b = kernel_basis(model);
    CountVector n0(model.n_jumps()), box(model.n_jumps(), 6);
    for (auto& x : n0) x = static_cast<std::int64_t>(gen() % 4);
    const auto pts = fiber_points(model, n0, box);
    EXPECT_TRUE(std::binary_search(pts.begin(), pts.end(), n0));
    for (const auto& m : pts) {
      EXPECT_EQ(model.image(m), model.image(n0));
      for (const auto& m2 : pts) {
        LatticeVector diff(m.size());
        for (std::size_t j = 0; j < m.size(); ++j) diff[j] = m[j] - m2[j];
        EXPECT_TRUE(in_lattice(b, diff));
      }
    }
    // Every box point with the same image appears.
    std::size_t count = 0;
    CountVector m(model.n_jumps(), 0);
    for (;;) {
      if (model.image(m) == model.image(n0)) ++count;
      std::size_t j = m.size();
      while (j > 0 && m[j - 1] == box[j - 1]) m[--j] = 0;
      if (j == 0) break;
      ++m[j - 1];
    }
    EXPECT_EQ(count, pts.size());
  }
}

TEST(KernelProperties, InLatticeAgreesWithCoefficientSearch) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<long> entry(-3, 3), target(-12, 12);
  int found = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const LatticeVector b1 = lv({entry(gen), entry(gen), entry(gen)});
    const LatticeVector b2 = lv({entry(gen), entry(gen), entry(gen)});
    std::unique_ptr<LatticeBasis> basis;
    try {
      basis = std::make_unique<LatticeBasis>(3, std::vector<LatticeVector>{b1, b2});
    } catch (const InputError&) {
      continue;
    }
    const LatticeVector v = lv({target(gen), target(gen), target(gen)});
    bool search = false;
    for (long z1 = -10; z1 <= 10 && !search; ++z1)
      for (long z2 = -10; z2 <= 10 && !search; ++z2) {
        bool eq = true;
        for (std::size_t j = 0; j < 3; ++j) eq = eq && z1 * b1[j] + z2 * b2[j] == v[j];
        search = eq;
      }
    if (search) {
      ++found;
      EXPECT_TRUE(in_lattice(*basis, v));
    }
    // Combinations are always members.
    LatticeVector w(3);
    for (std::size_t j = 0; j < 3; ++j) w[j] = 4 * b1[j] - 7 * b2[j];
    EXPECT_TRUE(in_lattice(*basis, w));
  }
  EXPECT_GT(found, 0);
}

}  // namespace
}  // namespace recip
