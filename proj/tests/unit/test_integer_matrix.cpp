// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "recip/error.hpp"
#include "recip/integer_matrix.hpp"

namespace recip {
namespace {

IntegerMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntegerMatrix m;
  for (auto r : rows) {
    IntegerRow row;
    for (long x : r) row.emplace_back(x);
    m.push_back(row);
  }
  return m;
}

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.size(), IntegerRow(b.front().size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      for (std::size_t j = 0; j < b.front().size(); ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

Rational det(IntegerMatrix m) {
  const std::size_t n = m.size();
  std::vector<std::vector<Rational>> q(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) q[i][j] = m[i][j];
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && q[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) std::swap(q[p], q[c]), d = -d;
    d *= q[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Rational f = q[r][c] / q[c][c];
      for (std::size_t j = c; j < n; ++j) q[r][j] -= f * q[c][j];
    }
  }
  return d;
}

TEST(ParseRational, Forms) {
  EXPECT_EQ(parse_rational("3"), Rational(3));
  EXPECT_EQ(parse_rational("-7"), Rational(-7));
  EXPECT_EQ(parse_rational("2/4"), Rational(1, 2));
  EXPECT_EQ(parse_rational("-1/2"), Rational(-1, 2));
  EXPECT_EQ(parse_rational("0.25"), Rational(1, 4));
  EXPECT_THROW(parse_rational("1/0"), InputError);
  EXPECT_THROW(parse_rational("abc"), InputError);
  EXPECT_THROW(parse_rational(""), InputError);
}

TEST(HermiteNormalForm, KnownLattice) {
  // (3,5) - (2,4) = (1,1) and (2,4) - 2(1,1) = (0,2).
  EXPECT_EQ(hermite_normal_form(mat({{2, 4}, {3, 5}})), mat({{1, 1}, {0, 2}}));
  EXPECT_EQ(hermite_normal_form(mat({{0, 0}, {0, 0}})), IntegerMatrix{});
  EXPECT_EQ(hermite_normal_form(mat({{4, 6}, {2, 3}})), mat({{2, 3}}));
}

TEST(RowEchelon, TransformIsUnimodularOnRandomMatrices) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<long> entry(-6, 6);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + gen() % 4, cols = 1 + gen() % 5;
    IntegerMatrix m(rows, IntegerRow(cols));
    for (auto& r : m)
      for (auto& x : r) x = entry(gen);
    for (bool reduce : {false, true}) {
      const auto e = row_echelon(m, reduce);
      EXPECT_EQ(multiply(e.transform, m), e.echelon);
      const Rational d = det(e.transform);
      EXPECT_TRUE(d == 1 || d == -1);
      EXPECT_EQ(e.rank, rational_rank(m));
      for (std::size_t i = 0; i < e.rank; ++i) EXPECT_GT(e.echelon[i][e.pivots[i]], 0);
      for (std::size_t i = e.rank; i < rows; ++i)
        for (const auto& x : e.echelon[i]) EXPECT_EQ(x, 0);
    }
  }
}

TEST(SolveInteger, FindsSolutionOrReportsNone) {
  const auto a = mat({{3, 4, 5}});
  const IntegerRow rhs{Integer(32)};
  const auto n = solve_integer(a, rhs);
  ASSERT_TRUE(n.has_value());
  EXPECT_EQ(3 * (*n)[0] + 4 * (*n)[1] + 5 * (*n)[2], 32);

  const auto even = mat({{2, 4}});
  EXPECT_FALSE(solve_integer(even, IntegerRow{Integer(3)}).has_value());
  EXPECT_TRUE(solve_integer(even, IntegerRow{Integer(6)}).has_value());
}

TEST(SolveInteger, RandomSystemsHaveConsistentSolutions) {
  std::mt19937_64 gen(5);
  std::uniform_int_distribution<long> entry(-5, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t rows = 1 + gen() % 3, cols = 1 + gen() % 4;
    IntegerMatrix m(rows, IntegerRow(cols));
    for (auto& r : m)
      for (auto& x : r) x = entry(gen);
    IntegerRow x(cols);
    for (auto& v : x) v = entry(gen);
    IntegerRow b(rows, 0);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) b[i] += m[i][j] * x[j];
    const auto s = solve_integer(m, b);
    ASSERT_TRUE(s.has_value());
    for (std::size_t i = 0; i < rows; ++i) {
      Integer acc = 0;
      for (std::size_t j = 0; j < cols; ++j) acc += m[i][j] * (*s)[j];
      EXPECT_EQ(acc, b[i]);
    }
  }
}

TEST(RationalCoordinates, IndependentRows) {
  const auto rows = mat({{1, 3, -3}, {0, 5, -4}});
  const IntegerRow v{Integer(-3), Integer(1), Integer(1)};
  const auto z = rational_coordinates(rows, v);
  ASSERT_TRUE(z.has_value());
  EXPECT_EQ((*z)[0], Rational(-3));
  EXPECT_EQ((*z)[1], Rational(2));
  EXPECT_FALSE(rational_coordinates(rows, IntegerRow{Integer(1), Integer(0), Integer(0)}).has_value());
}

TEST(EchelonCoordinates, MembershipInHnfBasis) {
  const auto hnf = hermite_normal_form(mat({{1, 3, -3}, {0, 5, -4}}));
  const auto piv = echelon_pivots(hnf);
  const IntegerRow inside{Integer(-2), Integer(-1), Integer(2)};
  const IntegerRow outside{Integer(0), Integer(1), Integer(0)};
  EXPECT_TRUE(echelon_coordinates(hnf, piv, inside).has_value());
  EXPECT_FALSE(echelon_coordinates(hnf, piv, outside).has_value());
}

}  // namespace
}  // namespace recip
