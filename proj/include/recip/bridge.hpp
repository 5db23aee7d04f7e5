// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "recip/latcore.hpp"
#include "recip/poisson.hpp"
#include "recip/process.hpp"
#include "recip/stats.hpp"

namespace recip {

struct EndpointPair {
  std::vector<double> x;
  std::vector<double> y;
  double w = 1.0;
};

struct EndpointMixture {
  std::vector<EndpointPair> entries;
  /// Positive weights summing to 1 (within 1e-9) and matching dimensions.
  void validate(const JumpModel& model) const;
};

double log_phi_invariant(const RateFunction& rates, const JumpModel& model, const LatticeVector& c);
/// prod_j lambda_j^{-c_j}; InputError if c is not in ker_Z(A).
double phi_invariant(const RateFunction& rates, const JumpModel& model, const LatticeVector& c);

/// Exact fiber key (stacked image) of y - x. Single-layer models round the
/// scaled displacement; multi-layer models search nonnegative counts in `box`.
/// Throws InfeasibleError when y - x is not an image of the jump matrix.
IntegerRow resolve_displacement(const JumpModel& model, std::span<const double> x, std::span<const double> y,
                                const CountVector& box);

inline constexpr double kDefaultTruncation = 1e-12;

/// Law of N_1 given X_0 = x, X_1 = y: p_lambda restricted to the fiber and renormalized.
SparseDistribution conditional_fiber_dist(const RateFunction& rates, const JumpModel& model, std::span<const double> x,
                                          std::span<const double> y, double delta = kDefaultTruncation);

/// Exact bridge sampler with the fiber table precomputed.
class BridgeSampler {
 public:
  BridgeSampler(const RateFunction& rates, const JumpModel& model, std::vector<double> x, std::vector<double> y,
                double delta = kDefaultTruncation);

  Path sample(Rng& rng) const;
  CountVector sample_counts(Rng& rng) const;

  const SparseDistribution& distribution() const { return dist_; }
  const IntegerRow& key() const { return key_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  RateFunction rates_;
  std::vector<double> x_, y_;
  IntegerRow key_;
  SparseDistribution dist_;
  std::vector<CountVector> points_;
  std::vector<double> cumulative_;
};

class MixtureSampler {
 public:
  MixtureSampler(const RateFunction& rates, const JumpModel& model, const EndpointMixture& mix,
                 double delta = kDefaultTruncation);
  Path sample(Rng& rng) const;
  CountVector sample_counts(Rng& rng) const;
  const std::vector<BridgeSampler>& bridges() const { return bridges_; }

 private:
  std::size_t pick(Rng& rng) const;
  std::vector<BridgeSampler> bridges_;
  std::vector<double> cumulative_;
};

Path sample_bridge(const RateFunction& rates, const JumpModel& model, std::span<const double> x,
                   std::span<const double> y, Rng& rng);
Path sample_reciprocal(const RateFunction& rates, const JumpModel& model, const EndpointMixture& mix, Rng& rng);

inline constexpr double kPhiTolerance = 1e-9;

struct SameClassReport {
  std::vector<LatticeVector> basis;
  std::vector<double> log_phi_diff;  // per basis vector
  bool phi_equal = false;
  /// Norm of the component of log nu1 - log nu2 inside span(basis); zero iff
  /// the difference is orthogonal to the kernel.
  double projection_residual = 0.0;
  bool homogeneous = true;
  double xi_max_diff = 0.0;  // general case only
  bool xi_equal = true;
  bool same = false;
};

/// Homogeneous rates only (UnsupportedError otherwise).
SameClassReport same_class(const RateFunction& rates1, const RateFunction& rates2, const JumpModel& model);
/// Adds the Xi comparison on a 1024-point grid; accepts inhomogeneous rates.
SameClassReport same_class_general(const RateFunction& rates1, const RateFunction& rates2, const JumpModel& model);

/// exp(-eps sum nu) eps^{|c|} prod nu^c / |c|! with c = N(cycle).
double cycle_prob_exact(const RateFunction& rates, const Cycle& cycle, double eps);
/// eps^{|c|} / (Phi^c |c|!), the leading term.
double cycle_limit(const RateFunction& rates, const JumpModel& model, const Cycle& cycle, double eps);

struct CycleRow {
  double eps = 0.0;
  std::int64_t n = 0;
  std::int64_t hits = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double ratio_to_limit = 0.0;
};

using PathSource = std::function<Path(Rng&)>;

/// Every replicate's path is reused for all eps (common random numbers).
std::vector<CycleRow> cycle_asymptotics_estimate(const PathSource& source, const Cycle& cycle, double t,
                                                 const std::vector<double>& eps, std::int64_t n, std::uint64_t seed,
                                                 double z, const std::function<double(double)>& limit,
                                                 unsigned threads);

std::string cycle_table_csv(const std::vector<CycleRow>& rows);

}  // namespace recip
