// SPDX-License-Identifier: Apache-2.0
#include "recip/integer_matrix.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "recip/error.hpp"

namespace recip {
namespace {

void subtract_multiple(IntegerRow& target, const IntegerRow& source, const Integer& factor) {
  if (factor == 0) return;
  for (std::size_t j = 0; j < target.size(); ++j) {
    if (source[j] != 0) target[j] -= factor * source[j];
  }
}

void negate(IntegerRow& row) {
  for (auto& x : row) x = -x;
}

Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }), s.end());
  if (s.empty()) throw InputError("empty rational literal");

  std::string_view body = s;
  bool negative = false;
  if (body.front() == '-' || body.front() == '+') {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) throw InputError("malformed rational '" + s + "'");
    Integer d(std::string(den), 10);
    if (d == 0) throw InputError("zero denominator in '" + s + "'");
    value = Rational(Integer(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !is_digits(whole)) || (!frac.empty() && !is_digits(frac)) ||
        (whole.empty() && frac.empty())) {
      throw InputError("malformed decimal '" + s + "'");
    }
    Integer scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    Integer digits(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    value = Rational(digits, scale);
  } else {
    if (!is_digits(body)) throw InputError("malformed rational '" + s + "'");
    value = Rational(Integer(std::string(body), 10));
  }
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

EchelonForm row_echelon(const IntegerMatrix& input, bool reduce_above) {
  EchelonForm out;
  out.echelon = input;
  const std::size_t n = input.size();
  const std::size_t m = n == 0 ? 0 : input.front().size();
  out.transform.assign(n, IntegerRow(n, 0));
  for (std::size_t i = 0; i < n; ++i) out.transform[i][i] = 1;

  auto& E = out.echelon;
  auto& U = out.transform;
  std::size_t r = 0;
  for (std::size_t col = 0; col < m && r < n; ++col) {
    // Euclid on the column: repeatedly move the smallest nonzero entry up and
    // reduce the rest modulo it.
    for (;;) {
      std::size_t best = n;
      for (std::size_t i = r; i < n; ++i) {
        if (E[i][col] == 0) continue;
        if (best == n || abs(E[i][col]) < abs(E[best][col])) best = i;
      }
      if (best == n) break;
      if (best != r) {
        std::swap(E[best], E[r]);
        std::swap(U[best], U[r]);
      }
      bool cleared = true;
      for (std::size_t i = r + 1; i < n; ++i) {
        if (E[i][col] == 0) continue;
        Integer q = floor_div(E[i][col], E[r][col]);
        subtract_multiple(E[i], E[r], q);
        subtract_multiple(U[i], U[r], q);
        if (E[i][col] != 0) cleared = false;
      }
      if (cleared) break;
    }
    if (E[r][col] == 0) continue;
    if (E[r][col] < 0) {
      negate(E[r]);
      negate(U[r]);
    }
    if (reduce_above) {
      for (std::size_t i = 0; i < r; ++i) {
        Integer q = floor_div(E[i][col], E[r][col]);
        subtract_multiple(E[i], E[r], q);
        subtract_multiple(U[i], U[r], q);
      }
    }
    out.pivots.push_back(col);
    ++r;
  }
  out.rank = r;
  return out;
}

IntegerMatrix hermite_normal_form(const IntegerMatrix& rows) {
  auto form = row_echelon(rows, true);
  form.echelon.resize(form.rank);
  return std::move(form.echelon);
}

std::vector<std::size_t> echelon_pivots(const IntegerMatrix& echelon) {
  std::vector<std::size_t> pivots;
  pivots.reserve(echelon.size());
  for (const auto& row : echelon) {
    auto it = std::find_if(row.begin(), row.end(), [](const Integer& x) { return x != 0; });
    pivots.push_back(static_cast<std::size_t>(it - row.begin()));
  }
  return pivots;
}

std::optional<std::vector<Integer>> echelon_coordinates(const IntegerMatrix& basis,
                                                       std::span<const std::size_t> pivots,
                                                       std::span<const Integer> target) {
  IntegerRow rest(target.begin(), target.end());
  std::vector<Integer> coords(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto p = pivots[i];
    if (p >= rest.size()) return std::nullopt;
    for (std::size_t q = (i == 0 ? 0 : pivots[i - 1] + 1); q < p; ++q) {
      if (rest[q] != 0) return std::nullopt;
    }
    const Integer& pivot = basis[i][p];
    if (!mpz_divisible_p(rest[p].get_mpz_t(), pivot.get_mpz_t())) return std::nullopt;
    coords[i] = rest[p] / pivot;
    subtract_multiple(rest, basis[i], coords[i]);
  }
  if (std::any_of(rest.begin(), rest.end(), [](const Integer& x) { return x != 0; })) return std::nullopt;
  return coords;
}

IntegerMatrix transpose(const IntegerMatrix& m) {
  if (m.empty()) return {};
  IntegerMatrix t(m.front().size(), IntegerRow(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  }
  return t;
}

std::optional<IntegerRow> solve_integer(const IntegerMatrix& matrix, std::span<const Integer> rhs) {
  if (matrix.size() != rhs.size()) throw InputError("solve_integer: right-hand side length mismatch");
  if (matrix.empty()) return IntegerRow{};
  const std::size_t cols = matrix.front().size();
  // U * M^T = E, so M * (U^T y) = E^T y; solve E^T y = rhs on the echelon rows.
  auto form = row_echelon(transpose(matrix), false);
  IntegerMatrix rows(form.echelon.begin(), form.echelon.begin() + static_cast<std::ptrdiff_t>(form.rank));
  auto y = echelon_coordinates(rows, form.pivots, rhs);
  if (!y) return std::nullopt;
  IntegerRow n(cols, 0);
  for (std::size_t i = 0; i < y->size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) n[j] += (*y)[i] * form.transform[i][j];
  }
  return n;
}

std::size_t rational_rank(const IntegerMatrix& matrix) { return row_echelon(matrix, false).rank; }

std::optional<std::vector<Rational>> rational_coordinates(const IntegerMatrix& rows,
                                                         std::span<const Integer> target) {
  const std::size_t k = rows.size();
  const std::size_t len = target.size();
  // Augmented system: len equations, k unknowns.
  std::vector<std::vector<Rational>> a(len, std::vector<Rational>(k + 1));
  for (std::size_t j = 0; j < len; ++j) {
    for (std::size_t i = 0; i < k; ++i) a[j][i] = rows[i].at(j);
    a[j][k] = target[j];
  }
  std::size_t r = 0;
  std::vector<std::size_t> pivot_col;
  for (std::size_t c = 0; c < k && r < len; ++c) {
    std::size_t p = r;
    while (p < len && a[p][c] == 0) ++p;
    if (p == len) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < len; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rational f = a[i][c] / a[r][c];
      for (std::size_t q = c; q <= k; ++q) a[i][q] -= f * a[r][q];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < len; ++i) {
    if (a[i][k] != 0) return std::nullopt;
  }
  if (r != k) return std::nullopt;  // dependent rows: no unique solution
  std::vector<Rational> z(k);
  for (std::size_t i = 0; i < r; ++i) z[pivot_col[i]] = a[i][k] / a[i][pivot_col[i]];
  return z;
}

}  // namespace recip
