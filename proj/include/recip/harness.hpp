// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "recip/bridge.hpp"
#include "recip/poisson.hpp"
#include "recip/process.hpp"

namespace recip {

inline constexpr double kDefaultZCrit = 4.0;
inline constexpr double kDefaultAtol = 1e-9;

struct McCompare {
  std::string name;
  std::int64_t n1 = 0, n2 = 0;
  double m1 = 0.0, m2 = 0.0;
  double se1 = 0.0, se2 = 0.0;
  double z = 0.0;
  bool pass = false;
};

/// Welch z = |m1 - m2| / sqrt(s1^2/n1 + s2^2/n2); pass iff z <= z_crit or |m1 - m2| <= atol.
McCompare mc_mean_compare(std::span<const double> x1, std::span<const double> x2, double z_crit = kDefaultZCrit,
                          double atol = kDefaultAtol);

enum class Reading { girsanov, literal };
const char* to_string(Reading r);
Reading parse_reading(const std::string& s);

struct TimeChangeConfig {
  CountVector nstar;  // target of F2 = 1{N_1 = n*}
  std::int64_t n = 1000000;
  std::uint64_t seed = 1;
  Reading reading = Reading::girsanov;
  double z_crit = kDefaultZCrit;
  double atol = kDefaultAtol;
  unsigned threads = 1;
};

struct TimeChangeReport {
  Reading reading = Reading::girsanov;
  std::vector<McCompare> tests;  // F1..F4
  std::size_t collisions = 0;
  bool pass = false;
};

/// Compares E[F o pi_u] with E[F D] over the built-in functional suite, using
/// independent replicate streams for the two sides.
TimeChangeReport verify_time_change(const RateFunction& rates, const TimeChange& u, const TimeChangeConfig& cfg);

/// Draws N_1 (only the counts) from a source.
using CountSource = std::function<CountVector(Rng&)>;

CountSource free_count_source(const RateFunction& rates);
CountSource mixture_count_source(const MixtureSampler& sampler);

struct ShiftConfig {
  std::int64_t n = 1000000;
  std::uint64_t seed = 1;
  double z_crit = kDefaultZCrit;
  std::int64_t min_count = 50;
  unsigned threads = 1;
};

struct ShiftPair {
  LatticeVector c;
  CountVector m;
  std::int64_t count_m = 0;
  std::int64_t count_shifted = 0;  // hits at m - c
  double lhs = 0.0;                // rho_hat(m - c)
  double rhs = 0.0;                // Phi^c G_c(m) rho_hat(m)
  double z = 0.0;
};

struct ShiftN1Report {
  std::vector<ShiftPair> pairs;
  std::optional<ShiftPair> worst;
  double worst_z = 0.0;
  bool pass = false;
};

/// Empirical check of rho(m - c) = Phi^c G_c(m) rho(m) on the law of N_1.
ShiftN1Report verify_shift_N1(const CountSource& source, const RateFunction& rates, const JumpModel& model,
                              const std::vector<LatticeVector>& gamma, const ShiftConfig& cfg);

enum class CtdnsVariant { paper, derived };
const char* to_string(CtdnsVariant v);
CtdnsVariant parse_variant(const std::string& s);

struct CtdnsReport {
  CtdnsVariant variant = CtdnsVariant::derived;
  double t = 1.0;
  LatticeVector c;
  bool factor_defined = true;
  double log_k = 0.0;
  double max_residual = 0.0;
  std::optional<CountVector> worst;
  bool pass = false;
};

/// Exact check at time t under the free process: rho_t(m - c) = K G_c(m) rho_t(m),
/// K = Phi^c (1-t)^{-|c|} (variant "paper") or Phi^c t^{-|c|} (derived).
CtdnsReport verify_ctdns(const RateFunction& rates, const JumpModel& model, double t, const LatticeVector& c,
                         CtdnsVariant variant, double delta = kDefaultTruncation);

struct ChenReport {
  std::vector<ShiftReport> shifts;
  double max_residual = 0.0;
  bool pass = false;
};

/// Shift identity for p_lambda itself on its truncation box, for each c.
ChenReport verify_chen(std::span<const double> lambda, const std::vector<LatticeVector>& cs,
                       double delta = kDefaultTruncation);

}  // namespace recip
