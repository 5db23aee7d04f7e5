// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "recip/error.hpp"
#include "recip/fibergraph.hpp"
#include "test_util.hpp"

namespace recip {
namespace {

using test::lv;

const std::vector<LatticeVector> kTwoMoves = {lv({2, -4, 2}), lv({0, -5, 4})};

TEST(FiberGraph, ThreeFourFiveComponents) {
  const auto g = build_fiber_graph(test::m345(), {6, 1, 2}, kTwoMoves, {11, 8, 7});
  EXPECT_EQ(g.vertices.size(), 12u);
  const auto comps = connected_components(g);
  EXPECT_EQ(comps.size(), 5u);

  auto three = kTwoMoves;
  three.push_back(lv({4, -3, 0}));
  const auto g3 = build_fiber_graph(test::m345(), {6, 1, 2}, three, {11, 8, 7});
  const auto comps3 = connected_components(g3);
  ASSERT_EQ(comps3.size(), 2u);
  // The moves keep the parity of the first coordinate, and the fiber has both parities.
  for (const auto& comp : comps3) {
    const auto parity = g3.vertices[comp.front()][0] % 2;
    for (auto i : comp) EXPECT_EQ(g3.vertices[i][0] % 2, parity);
  }
}

TEST(FiberGraph, EmptyGammaIsEdgeless) {
  const auto g = build_fiber_graph(test::m345(), {6, 1, 2}, {}, {11, 8, 7});
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(connected_components(g).size(), g.vertices.size());
}

TEST(FiberGraph, DiagonalChain) {
  const auto g = build_fiber_graph(test::pm1(), {0, 0}, {lv({1, 1})}, {3, 3});
  ASSERT_EQ(g.vertices.size(), 4u);
  const std::vector<std::pair<std::size_t, std::size_t>> chain = {{0, 1}, {1, 2}, {2, 3}};
  EXPECT_EQ(g.edges, chain);
  EXPECT_EQ(connected_components(g).size(), 1u);
}

TEST(FiberGraph, RejectsVectorsOutsideKernel) {
  EXPECT_THROW(build_fiber_graph(test::m345(), {6, 1, 2}, {lv({1, 0, 0})}, {11, 8, 7}), InputError);
}

TEST(FiberGraph, EdgesRespectGenerators) {
  std::mt19937_64 gen(3);
  const auto model = test::m345();
  const std::vector<LatticeVector> gamma = {lv({-3, 1, 1}), lv({1, -2, 1}), lv({2, 1, -2}), lv({0, 5, -4})};
  for (int trial = 0; trial < 20; ++trial) {
    CountVector n0 = {static_cast<std::int64_t>(gen() % 6), static_cast<std::int64_t>(gen() % 6),
                      static_cast<std::int64_t>(gen() % 6)};
    const auto g = build_fiber_graph(model, n0, gamma, {12, 12, 12});
    ASSERT_EQ(g.edges.size(), g.generator_of_edge.size());
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const auto [i, j] = g.edges[e];
      EXPECT_LT(i, j);
      const auto& c = g.generator_of_edge[e];
      bool plus = true, minus = true;
      for (std::size_t k = 0; k < 3; ++k) {
        const Integer d = g.vertices[j][k] - g.vertices[i][k];
        plus = plus && d == c[k];
        minus = minus && d == -c[k];
      }
      EXPECT_TRUE(plus || minus);
    }
  }
}

TEST(IsolatedCertificate, Examples) {
  const auto basis = kernel_basis(test::m345()).vectors();
  EXPECT_TRUE(isolated_certificate({3, 0, 0}, {lv({1, -2, 1}), lv({2, 1, -2})}));
  EXPECT_TRUE(isolated_certificate({3, 0, 0}, basis));
  EXPECT_FALSE(isolated_certificate({10, 10, 10}, basis));
  EXPECT_TRUE(isolated_certificate({3, 0, 0}, {}));
}

TEST(IsolatedCertificate, ImpliesNoEdgeAtSeed) {
  std::mt19937_64 gen(8);
  const auto model = test::m345();
  const std::vector<LatticeVector> gamma = {lv({1, -2, 1}), lv({2, 1, -2})};
  for (int trial = 0; trial < 200; ++trial) {
    CountVector n0 = {static_cast<std::int64_t>(gen() % 5), static_cast<std::int64_t>(gen() % 5),
                      static_cast<std::int64_t>(gen() % 5)};
    if (!isolated_certificate(n0, gamma)) continue;
    for (std::int64_t b = 0; b < 4; ++b) {
      CountVector box = {n0[0] + b, n0[1] + b, n0[2] + b};
      const auto g = build_fiber_graph(model, n0, gamma, box);
      const auto it = std::lower_bound(g.vertices.begin(), g.vertices.end(), n0);
      const auto idx = static_cast<std::size_t>(it - g.vertices.begin());
      for (const auto& [i, j] : g.edges) EXPECT_TRUE(i != idx && j != idx);
    }
  }
}

TEST(Posray, Examples) {
  auto r = posray_check({lv({1, 1})});
  EXPECT_TRUE(r.cond_i);
  EXPECT_TRUE(r.cond_ii);
  r = posray_check({lv({-3, 1, 1}), lv({1, -2, 1})});
  EXPECT_FALSE(r.cond_i);
  EXPECT_FALSE(r.cond_ii);
  r = posray_check({});
  EXPECT_FALSE(r.cond_i);
  EXPECT_TRUE(r.cond_ii);
}

TEST(Posray, PositiveKernelGivesConnectedFibers) {
  // Two opposite-sign jumps -p, q: the kernel is spanned by a positive vector.
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::int64_t p = 1 + static_cast<std::int64_t>(gen() % 5), q = 1 + static_cast<std::int64_t>(gen() % 5);
    if (p == q) continue;
    const auto model = JumpModel::from_integer_columns({{-p}, {q}});
    const auto basis = kernel_basis(model).vectors();
    const auto pos = posray_check(basis);
    ASSERT_TRUE(pos.cond_i || pos.cond_ii);
    const CountVector seed = {static_cast<std::int64_t>(gen() % 7), static_cast<std::int64_t>(gen() % 7)};
    const CountVector box = {seed[0] + static_cast<std::int64_t>(gen() % 15), seed[1] + static_cast<std::int64_t>(gen() % 15)};
    const auto g = build_fiber_graph(model, seed, basis, box);
    EXPECT_EQ(connected_components(g).size(), 1u);
  }
}

TEST(ConnectCertificate, Examples) {
  const auto model = test::pm1();
  const std::vector<LatticeVector> basis = {lv({1, 1})};
  EXPECT_TRUE(connect_certificate(model, basis, {2, 2}, {2, 2}).empty());
  EXPECT_EQ(connect_certificate(model, basis, {0, 0}, {2, 2}), (std::vector<LatticeVector>{lv({1, 1}), lv({1, 1})}));
  EXPECT_THROW(connect_certificate(model, basis, {1, 0}, {0, 0}), InputError);
}

TEST(ConnectCertificate, ReplayStaysNonnegative) {
  // Kernel of columns (1,0),(0,1),(-1,-1),(2,1) is s(1,1,1,0) + t(-2,-1,0,1);
  // (s,t) = (3,1) gives the positive vector, and with (1,0) a unimodular change.
  const auto model = JumpModel::from_integer_columns({{1, 0}, {0, 1}, {-1, -1}, {2, 1}});
  const std::vector<LatticeVector> basis = {lv({1, 2, 3, 1}), lv({1, 1, 1, 0})};
  ASSERT_TRUE(kernel_basis(model).same_lattice(LatticeBasis(4, basis)));
  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 100; ++trial) {
    CountVector n(4);
    for (auto& x : n) x = static_cast<std::int64_t>(gen() % 4);
    const auto fiber = fiber_points(model, n, {6, 6, 6, 6});
    const auto& m = fiber[gen() % fiber.size()];
    const auto moves = connect_certificate(model, basis, n, m);
    CountVector at = n;
    for (const auto& c : moves) {
      for (std::size_t j = 0; j < 4; ++j) {
        at[j] += c[j].get_si();
        EXPECT_GE(at[j], 0);
      }
    }
    EXPECT_EQ(at, m);
  }
}

TEST(GensetReport, Verdicts) {
  const auto model = test::m345();
  auto r = genset_box_report(model, kTwoMoves, {{6, 1, 2}}, CountVector{11, 8, 7});
  EXPECT_STREQ(r.verdict.c_str(), verdict::kCertified);
  EXPECT_EQ(r.seeds[0].components, 5u);
  EXPECT_TRUE(r.seeds[0].fiber_complete_in_box);

  const std::vector<LatticeVector> gh = {lv({1, -2, 1}), lv({2, 1, -2})};
  r = genset_box_report(model, gh, {{3, 0, 0}}, std::nullopt);
  EXPECT_STREQ(r.verdict.c_str(), verdict::kCertified);
  EXPECT_EQ(r.seeds[0].fiber_size, 2u);
  const auto& iso = r.seeds[0].isolated_certificates;
  EXPECT_NE(std::find(iso.begin(), iso.end(), CountVector{3, 0, 0}), iso.end());

  // Boxes that cut the fiber short cannot be conclusive about connectivity.
  r = genset_box_report(model, kTwoMoves, {{6, 1, 2}}, CountVector{6, 8, 7});
  EXPECT_FALSE(r.seeds[0].fiber_complete_in_box);

  r = genset_box_report(test::pm1(), kernel_basis(test::pm1()).vectors(), {{0, 0}, {5, 2}}, CountVector{8, 8});
  EXPECT_STREQ(r.verdict.c_str(), verdict::kConnected);

  const auto single = JumpModel::from_integer_columns({{1}, {2}});
  r = genset_box_report(single, kernel_basis(single).vectors(), {{0, 0}}, std::nullopt);
  EXPECT_STREQ(r.verdict.c_str(), verdict::kConnected);
  EXPECT_EQ(r.seeds[0].fiber_size, 1u);
}

}  // namespace
}  // namespace recip
