// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recip/latcore.hpp"

namespace recip {

/// Finitely supported weights on N^A; mass outside the support is at most tail_bound.
struct SparseDistribution {
  std::map<CountVector, double> weights;
  double tail_bound = 0.0;
  /// Componentwise upper bounds of the region where `weights` is exact (truncated laws).
  std::optional<CountVector> box;

  double at(const CountVector& n) const;
  double total() const;
  /// Throws InputError on negative coordinates, negative weights or ragged vectors.
  void validate() const;
};

double log_pois_pmf(std::span<const double> lambda, std::span<const std::int64_t> n);
double pois_pmf(std::span<const double> lambda, std::span<const std::int64_t> n);

/// Per-coordinate upper bounds M_j with P(Poisson(lambda_j) > M_j) < delta / A.
CountVector truncation_box(std::span<const double> lambda, double delta);
/// Upper tail P(Poisson(lambda) > m), summed directly (no cancellation).
double pois_upper_tail(double lambda, std::int64_t m);

SparseDistribution truncate_pois(std::span<const double> lambda, double delta);

/// lambda^c = prod_j lambda_j^{c_j}, in log space.
double log_lambda_power(std::span<const double> lambda, const LatticeVector& c);
/// log G_c(n); -inf when some n_j < c_j.
double log_shift_density(const LatticeVector& c, std::span<const std::int64_t> n);

struct ShiftReport {
  LatticeVector c;
  double max_residual = 0.0;
  std::optional<CountVector> worst;
  std::size_t points = 0;
};

/// Residual |rho(n - c) - K G_c(n) rho(n)| over support-adjacent n, with
/// K = lambda^{-c} (or K = exp(log_k) when given). With a box, only pairs
/// whose both points lie in it are compared.
ShiftReport check_shift_residual(const SparseDistribution& rho, const LatticeVector& c, double log_k);
ShiftReport check_shift_identity(const SparseDistribution& rho, std::span<const double> lambda, const LatticeVector& c);

inline constexpr double kExactTolerance = 1e-10;

struct MembershipReport {
  std::size_t fibers = 0;
  double max_spread = 0.0;
  std::optional<CountVector> worst_fiber_point;
  std::vector<CountVector> ac_violations;
  bool member = false;
};

/// Density rho/mu must be constant on every fiber of the model.
MembershipReport check_class_membership(const SparseDistribution& rho, const SparseDistribution& mu,
                                        const JumpModel& model, double tolerance = kExactTolerance);

struct CounterexampleReport {
  std::vector<LatticeVector> basis;
  LatticeVector v;
  CountVector n_v;
  std::vector<LatticeVector> feasible_moves;  // every c in ker_Z(A) with n_v + c >= 0
  bool unique_move = false;                    // feasible_moves == {0, v}
  std::vector<ShiftReport> shifts;             // for c in +-basis
  bool shifts_pass = false;
  MembershipReport membership;
  double p_nv = 0.0;
  SparseDistribution rho;
};

/// rho = eps delta_{n_v} + (1 - eps) p_lambda for A = {3,4,5}.
CounterexampleReport counterexample_345(double eps, std::span<const double> lambda, double delta = 1e-12);

}  // namespace recip
