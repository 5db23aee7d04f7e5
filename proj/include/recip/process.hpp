// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "recip/latcore.hpp"
#include "recip/rng.hpp"

namespace recip {

/// Continuous, strictly positive, piecewise-linear function on [0, 1].
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values);
  static PiecewiseLinear constant(double value);

  double eval(double t) const;
  /// Integral over [s, t].
  double integral(double s, double t) const;
  double total() const { return cumulative_.back(); }
  /// Smallest t with integral(0, t) == target, target in [0, total()].
  double inverse_integral(double target) const;
  bool is_constant() const;
  double min_value() const;

  const std::vector<double>& breakpoints() const { return t_; }
  const std::vector<double>& values() const { return v_; }

 private:
  double integral_to(double t) const;

  std::vector<double> t_;
  std::vector<double> v_;
  std::vector<double> cumulative_;
};

/// One intensity per jump type.
class RateFunction {
 public:
  explicit RateFunction(std::vector<PiecewiseLinear> per_type);
  static RateFunction homogeneous(std::span<const double> nu);

  std::size_t size() const { return per_type_.size(); }
  const PiecewiseLinear& operator[](std::size_t j) const { return per_type_.at(j); }
  double eval(std::size_t j, double t) const { return (*this)[j].eval(t); }
  double integral(std::size_t j, double s, double t) const { return (*this)[j].integral(s, t); }
  /// lambda_j = integral of nu_j over [0, 1].
  std::vector<double> lambdas() const;
  bool homogeneous() const;

 private:
  std::vector<PiecewiseLinear> per_type_;
};

double rate_integral(const RateFunction& rates, std::size_t j, double s, double t);
/// nu_j(t) / nu_j(s).
double xi_invariant(const RateFunction& rates, std::size_t j, double s, double t);

struct Event {
  double t = 0.0;
  std::size_t j = 0;  // 0-based jump type
  bool operator==(const Event&) const = default;
};

struct Path {
  std::vector<double> x0;
  std::vector<Event> events;  // sorted by time, ties by type

  /// Jump counts of events with time <= t.
  CountVector counts(std::size_t n_jumps, double t = 1.0) const;
  std::size_t total(double t = 1.0) const;
  /// x0 + A N_t.
  std::vector<double> position(const JumpModel& model, double t = 1.0) const;
  bool operator==(const Path&) const = default;
};

/// A single u(j, .): increasing C^1 bijection of [0, 1].
class Warp {
 public:
  virtual ~Warp() = default;
  virtual double eval(double t) const = 0;
  virtual double derivative(double t) const = 0;
  /// Default: bisection to 1e-13.
  virtual double inverse(double y) const;
};

/// u(t) = (e^{a t} - 1) / (e^a - 1); identity at a = 0.
class ExpWarp final : public Warp {
 public:
  explicit ExpWarp(double a);
  double eval(double t) const override;
  double derivative(double t) const override;
  double inverse(double y) const override;
  double a() const { return a_; }

 private:
  double a_;
};

class TimeChange {
 public:
  /// Validates every warp on a 4097-point grid; throws InputError on failure.
  explicit TimeChange(std::vector<std::shared_ptr<const Warp>> per_type);
  static TimeChange identity(std::size_t n_jumps);
  static TimeChange exp_warp(std::span<const double> a);

  std::size_t size() const { return per_type_.size(); }
  const Warp& operator[](std::size_t j) const { return *per_type_.at(j); }
  /// exp_warp parameters when built by exp_warp(), else empty.
  const std::vector<double>& exp_parameters() const { return exp_a_; }

 private:
  std::vector<std::shared_ptr<const Warp>> per_type_;
  std::vector<double> exp_a_;
};

/// Closed jump sequence (0-based types) with zero displacement.
class Cycle {
 public:
  static Cycle from_types(const JumpModel& model, std::vector<std::size_t> types);
  /// Each consecutive difference of `positions` must equal one jump exactly.
  static Cycle from_positions(const JumpModel& model, const std::vector<std::vector<double>>& positions);

  const std::vector<std::size_t>& types() const { return types_; }
  const CountVector& counts() const { return counts_; }
  std::size_t length() const { return types_.size(); }

 private:
  std::vector<std::size_t> types_;
  CountVector counts_;
};

/// Poisson(mean) by inversion for small means, else the standard library.
std::int64_t sample_poisson(double mean, Rng& rng);

Path sample_cpp(std::span<const double> x0, const RateFunction& rates, Rng& rng);
/// Event times of one type given its count: i.i.d. with density nu_j / lambda_j.
void sample_jump_times(const RateFunction& rates, std::size_t j, std::int64_t count, Rng& rng, std::vector<Event>& out);
void sort_events(std::vector<Event>& events);

/// Moves each event (T, j) to u_j^{-1}(T). Exact ties are broken by type and
/// counted in `collisions` when given.
Path apply_time_change(const Path& path, const TimeChange& u, std::size_t* collisions = nullptr);

/// log D_u = sum over events of log(nu_j(u_j(T)) u_j'(T) / nu_j(T)).
double log_time_change_density(const Path& path, const TimeChange& u, const RateFunction& rates);
double time_change_density(const Path& path, const TimeChange& u, const RateFunction& rates);
/// The printed exponent read as (log Xi) * u': sum of u_j'(T) log Xi(j, T, u_j(T)).
double log_literal_density(const Path& path, const TimeChange& u, const RateFunction& rates);

/// Positions of X relative to X_t over (t, t + eps], starting with 0.
std::vector<std::vector<double>> trace(const Path& path, const JumpModel& model, double t, double eps);
bool cycle_hit(const Path& path, double t, double eps, const Cycle& cycle);

}  // namespace recip
