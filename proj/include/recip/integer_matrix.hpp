// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace recip {

using Integer = mpz_class;
using Rational = mpq_class;

using IntegerRow = std::vector<Integer>;
using IntegerMatrix = std::vector<IntegerRow>;  // row-major, all rows the same length
using RationalMatrix = std::vector<std::vector<Rational>>;

/// Parses "p", "-p" or "p/q" into a canonical rational. Throws InputError.
Rational parse_rational(std::string_view text);

/*
 * Row echelon form under unimodular row operations.
 *
 * transform * input == echelon, with transform in GL_n(Z). Pivots are strictly
 * increasing column indices and positive; rows [rank, n) of `echelon` are zero,
 * so rows [rank, n) of `transform` span the integer left kernel of `input`.
 * With `reduce_above` the entries above each pivot are brought into
 * [0, pivot), which makes the nonzero part the row-style Hermite normal form.
 */
struct EchelonForm {
  IntegerMatrix echelon;
  IntegerMatrix transform;
  std::vector<std::size_t> pivots;
  std::size_t rank = 0;
};

EchelonForm row_echelon(const IntegerMatrix& input, bool reduce_above);

/// Row-style HNF of the lattice spanned by `rows`; zero rows are dropped.
IntegerMatrix hermite_normal_form(const IntegerMatrix& rows);

/// Solves sum_i z_i * basis[i] == target for integer z given an echelon basis
/// (pivot columns `pivots`). Returns nullopt when target is outside the lattice.
std::optional<std::vector<Integer>> echelon_coordinates(const IntegerMatrix& basis,
                                                       std::span<const std::size_t> pivots,
                                                       std::span<const Integer> target);

/// Pivot column of each row of an echelon matrix.
std::vector<std::size_t> echelon_pivots(const IntegerMatrix& echelon);

/// Some integer n with matrix * n == rhs, or nullopt if none exists.
std::optional<IntegerRow> solve_integer(const IntegerMatrix& matrix, std::span<const Integer> rhs);

/// Rank over Q.
std::size_t rational_rank(const IntegerMatrix& matrix);

/// Unique rational solution of sum_i z_i * rows[i] == target for linearly
/// independent rows, or nullopt if target is outside their span.
std::optional<std::vector<Rational>> rational_coordinates(const IntegerMatrix& rows,
                                                         std::span<const Integer> target);

IntegerMatrix transpose(const IntegerMatrix& m);

}  // namespace recip
