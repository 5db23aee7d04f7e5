// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recip/integer_matrix.hpp"

namespace recip {

/// Jump-count vector in N^A (or a signed difference of two of them).
using CountVector = std::vector<std::int64_t>;

/// Integer vector of length A, e.g. an element of ker_Z(A).
using LatticeVector = IntegerRow;

LatticeVector to_lattice(std::span<const std::int64_t> v);
/// Throws InputError if a coordinate does not fit in 64 bits.
CountVector to_counts(const LatticeVector& v);

/// One term kappa * M of the decomposition of the real jump matrix.
struct Layer {
  std::string constant;  // "1", "sqrt2", "sqrt3", ... or a user label
  double value = 1.0;    // numeric value of the constant
  RationalMatrix matrix; // dim x n_jumps
};

/// Numeric value of a known constant label, or nullopt.
std::optional<double> known_constant(const std::string& label);

class JumpModel {
 public:
  JumpModel(std::size_t dim, std::size_t n_jumps, std::vector<Layer> layers);

  /// Single exact rational layer, one jump per column.
  static JumpModel from_integer_columns(const std::vector<std::vector<std::int64_t>>& columns);

  std::size_t dim() const { return dim_; }
  std::size_t n_jumps() const { return n_jumps_; }
  const std::vector<Layer>& layers() const { return layers_; }

  /// Every layer row scaled by the lcm of its denominators, stacked layer by
  /// layer. Its integer kernel is ker_Z(A).
  const IntegerMatrix& stacked() const { return stacked_; }
  /// Row scale factors used to build `stacked()`.
  const std::vector<Integer>& row_scales() const { return row_scales_; }
  std::size_t stacked_rank() const { return stacked_rank_; }

  /// The real d x A matrix sum_k kappa_k * layer_k.
  const std::vector<std::vector<double>>& real_matrix() const { return real_; }
  std::vector<double> jump(std::size_t j) const;

  /// stacked() * n, the exact fiber key of n.
  IntegerRow image(std::span<const std::int64_t> n) const;
  IntegerRow image(const LatticeVector& n) const;
  /// x0 + A n in floating point.
  std::vector<double> displace(std::span<const double> x0, std::span<const std::int64_t> n) const;

 private:
  std::size_t dim_;
  std::size_t n_jumps_;
  std::vector<Layer> layers_;
  IntegerMatrix stacked_;
  std::vector<Integer> row_scales_;
  std::size_t stacked_rank_ = 0;
  std::vector<std::vector<double>> real_;
};

/// A Z-linearly independent family; membership is answered through its HNF.
class LatticeBasis {
 public:
  LatticeBasis() = default;
  LatticeBasis(std::size_t length, std::vector<LatticeVector> vectors);

  std::size_t length() const { return length_; }
  std::size_t rank() const { return vectors_.size(); }
  const std::vector<LatticeVector>& vectors() const { return vectors_; }
  const IntegerMatrix& hnf() const { return hnf_; }

  bool contains(const LatticeVector& v) const;
  std::optional<std::vector<Integer>> hnf_coordinates(const LatticeVector& v) const;
  /// Same lattice (equal HNF).
  bool same_lattice(const LatticeBasis& other) const;

 private:
  std::size_t length_ = 0;
  std::vector<LatticeVector> vectors_;
  IntegerMatrix hnf_;
  std::vector<std::size_t> pivots_;
};

/// Canonical (HNF) basis of ker_Z(A).
LatticeBasis kernel_basis(const JumpModel& model);

bool in_kernel(const JumpModel& model, const LatticeVector& v);
bool in_lattice(const LatticeBasis& basis, const LatticeVector& v);

/// prod_j n_j! / (n_j - c_j)!, zero if some n_j < c_j.
Rational shift_density_G(const LatticeVector& c, std::span<const std::int64_t> n);

inline constexpr double kFiberScanLimit = 2e7;

/// All m in [0, box] with m - n0 in ker_Z(A), sorted lexicographically.
std::vector<CountVector> fiber_points(const JumpModel& model, const CountVector& n0, const CountVector& box);

/// All m in [0, box] with m - anchor in ker_Z(A); the anchor may have any sign.
std::vector<CountVector> fiber_points_at(const JumpModel& model, const LatticeVector& anchor, const CountVector& box);

/// Bounds implied by a stacked row with all entries of one strict sign, if any.
std::optional<CountVector> default_box(const JumpModel& model, const CountVector& n0);

}  // namespace recip
