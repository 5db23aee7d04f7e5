// SPDX-License-Identifier: Apache-2.0
#include "recip/process.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "recip/error.hpp"

namespace recip {
namespace {

void check_unit_interval(double s, double t) {
  if (!(s >= 0.0 && t <= 1.0 && s <= t)) throw InputError("interval must satisfy 0 <= s <= t <= 1");
}

}  // namespace

PiecewiseLinear::PiecewiseLinear(std::vector<double> breakpoints, std::vector<double> values)
    : t_(std::move(breakpoints)), v_(std::move(values)) {
  if (t_.size() < 2 || t_.size() != v_.size()) {
    throw InputError("rate: need at least two breakpoints and one value per breakpoint");
  }
  if (t_.front() != 0.0 || t_.back() != 1.0) throw InputError("rate: breakpoints must start at 0 and end at 1");
  for (std::size_t k = 1; k < t_.size(); ++k) {
    if (!(t_[k] > t_[k - 1])) throw InputError("rate: breakpoints must be strictly increasing");
  }
  for (double v : v_) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError("rate: values must be positive and finite");
  }
  cumulative_.assign(t_.size(), 0.0);
  for (std::size_t k = 1; k < t_.size(); ++k) {
    cumulative_[k] = cumulative_[k - 1] + 0.5 * (v_[k - 1] + v_[k]) * (t_[k] - t_[k - 1]);
  }
}

PiecewiseLinear PiecewiseLinear::constant(double value) { return PiecewiseLinear({0.0, 1.0}, {value, value}); }

double PiecewiseLinear::eval(double t) const {
  if (t <= 0.0) return v_.front();
  if (t >= 1.0) return v_.back();
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double w = (t - t_[k]) / (t_[k + 1] - t_[k]);
  return v_[k] + w * (v_[k + 1] - v_[k]);
}

double PiecewiseLinear::integral_to(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return cumulative_.back();
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  const std::size_t k = static_cast<std::size_t>(it - t_.begin()) - 1;
  const double h = t - t_[k];
  return cumulative_[k] + 0.5 * (v_[k] + eval(t)) * h;
}

double PiecewiseLinear::integral(double s, double t) const {
  check_unit_interval(s, t);
  if (s == t) return 0.0;
  return integral_to(t) - integral_to(s);
}

double PiecewiseLinear::inverse_integral(double target) const {
  if (target <= 0.0) return 0.0;
  if (target >= cumulative_.back()) return 1.0;
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const std::size_t k = static_cast<std::size_t>(it - cumulative_.begin()) - 1;
  const double r = target - cumulative_[k];
  const double v0 = v_[k];
  const double slope = (v_[k + 1] - v_[k]) / (t_[k + 1] - t_[k]);
  // Root of v0 tau + slope tau^2 / 2 = r, in the cancellation-free form.
  const double disc = std::max(0.0, v0 * v0 + 2.0 * slope * r);
  const double tau = 2.0 * r / (v0 + std::sqrt(disc));
  return std::min(t_[k + 1], t_[k] + tau);
}

bool PiecewiseLinear::is_constant() const {
  return std::all_of(v_.begin(), v_.end(), [&](double v) { return v == v_.front(); });
}

double PiecewiseLinear::min_value() const { return *std::min_element(v_.begin(), v_.end()); }

RateFunction::RateFunction(std::vector<PiecewiseLinear> per_type) : per_type_(std::move(per_type)) {
  if (per_type_.empty()) throw InputError("rates: no jump types");
}

RateFunction RateFunction::homogeneous(std::span<const double> nu) {
  std::vector<PiecewiseLinear> per;
  for (double v : nu) per.push_back(PiecewiseLinear::constant(v));
  return RateFunction(std::move(per));
}

std::vector<double> RateFunction::lambdas() const {
  std::vector<double> out;
  for (const auto& r : per_type_) out.push_back(r.total());
  return out;
}

bool RateFunction::homogeneous() const {
  return std::all_of(per_type_.begin(), per_type_.end(), [](const PiecewiseLinear& r) { return r.is_constant(); });
}

double rate_integral(const RateFunction& rates, std::size_t j, double s, double t) { return rates.integral(j, s, t); }

double xi_invariant(const RateFunction& rates, std::size_t j, double s, double t) {
  if (s < 0.0 || s > 1.0 || t < 0.0 || t > 1.0) throw InputError("xi: times must lie in [0,1]");
  return rates.eval(j, t) / rates.eval(j, s);
}

CountVector Path::counts(std::size_t n_jumps, double t) const {
  CountVector n(n_jumps, 0);
  for (const auto& e : events) {
    if (e.t > t) break;
    if (e.j >= n_jumps) throw InputError("path: jump type out of range");
    ++n[e.j];
  }
  return n;
}

std::size_t Path::total(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(events.begin(), events.end(), t, [](double v, const Event& e) { return v < e.t; }) -
      events.begin());
}

std::vector<double> Path::position(const JumpModel& model, double t) const {
  const auto n = counts(model.n_jumps(), t);
  return model.displace(x0, n);
}

double Warp::inverse(double y) const {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-13) {
    const double mid = 0.5 * (lo + hi);
    (eval(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ExpWarp::ExpWarp(double a) : a_(a) {
  if (!std::isfinite(a) || std::fabs(a) > 700.0) throw InputError("exp_warp: parameter out of range");
}

double ExpWarp::eval(double t) const {
  if (std::fabs(a_) < 1e-12) return t;
  return std::expm1(a_ * t) / std::expm1(a_);
}

double ExpWarp::derivative(double t) const {
  if (std::fabs(a_) < 1e-12) return 1.0;
  return a_ * std::exp(a_ * t) / std::expm1(a_);
}

double ExpWarp::inverse(double y) const {
  if (std::fabs(a_) < 1e-12) return y;
  return std::log1p(y * std::expm1(a_)) / a_;
}

TimeChange::TimeChange(std::vector<std::shared_ptr<const Warp>> per_type) : per_type_(std::move(per_type)) {
  constexpr int kGrid = 4096;
  for (std::size_t j = 0; j < per_type_.size(); ++j) {
    const Warp& u = *per_type_[j];
    const std::string who = "time change for type " + std::to_string(j + 1);
    if (std::fabs(u.eval(0.0)) > 1e-12 || std::fabs(u.eval(1.0) - 1.0) > 1e-12) {
      throw InputError(who + " must fix 0 and 1");
    }
    double prev = u.eval(0.0);
    for (int k = 0; k <= kGrid; ++k) {
      const double t = static_cast<double>(k) / kGrid;
      const double d = u.derivative(t);
      if (!(d > 0.0) || !std::isfinite(d)) throw InputError(who + " has a nonpositive derivative");
      const double v = u.eval(t);
      if (k > 0 && !(v > prev)) throw InputError(who + " is not strictly increasing");
      prev = v;
    }
  }
}

TimeChange TimeChange::identity(std::size_t n_jumps) {
  std::vector<double> a(n_jumps, 0.0);
  return exp_warp(a);
}

TimeChange TimeChange::exp_warp(std::span<const double> a) {
  std::vector<std::shared_ptr<const Warp>> per;
  for (double x : a) per.push_back(std::make_shared<ExpWarp>(x));
  TimeChange u(std::move(per));
  u.exp_a_.assign(a.begin(), a.end());
  return u;
}

Cycle Cycle::from_types(const JumpModel& model, std::vector<std::size_t> types) {
  if (types.empty()) throw InputError("cycle: must contain at least one jump");
  Cycle c;
  c.counts_.assign(model.n_jumps(), 0);
  for (auto j : types) {
    if (j >= model.n_jumps()) throw InputError("cycle: jump type out of range");
    ++c.counts_[j];
  }
  if (!in_kernel(model, to_lattice(c.counts_))) throw InputError("cycle: jumps do not return to the start");
  c.types_ = std::move(types);
  return c;
}

Cycle Cycle::from_positions(const JumpModel& model, const std::vector<std::vector<double>>& positions) {
  if (positions.size() < 2) throw InputError("cycle: need at least two positions");
  std::vector<std::size_t> types;
  for (std::size_t k = 1; k < positions.size(); ++k) {
    if (positions[k].size() != model.dim() || positions[k - 1].size() != model.dim()) {
      throw InputError("cycle: positions must have dimension " + std::to_string(model.dim()));
    }
    std::size_t found = model.n_jumps();
    for (std::size_t j = 0; j < model.n_jumps() && found == model.n_jumps(); ++j) {
      const auto a = model.jump(j);
      bool match = true;
      for (std::size_t i = 0; i < model.dim(); ++i) {
        match = match && std::fabs(positions[k][i] - positions[k - 1][i] - a[i]) <= 1e-9;
      }
      if (match) found = j;
    }
    if (found == model.n_jumps()) throw InputError("cycle: step " + std::to_string(k) + " is not a jump of the model");
    types.push_back(found);
  }
  return from_types(model, std::move(types));
}

std::int64_t sample_poisson(double mean, Rng& rng) {
  if (!(mean >= 0.0)) throw InputError("Poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean <= 50.0) {
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    std::int64_t k = 0;
    while (u > cdf && k < 10000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p == 0.0) break;
    }
    return k;
  }
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(rng);
}

void sample_jump_times(const RateFunction& rates, std::size_t j, std::int64_t count, Rng& rng,
                       std::vector<Event>& out) {
  const auto& r = rates[j];
  const double total = r.total();
  for (std::int64_t k = 0; k < count; ++k) out.push_back({r.inverse_integral(rng.uniform() * total), j});
}

void sort_events(std::vector<Event>& events) {
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return a.t < b.t || (a.t == b.t && a.j < b.j);
  });
}

Path sample_cpp(std::span<const double> x0, const RateFunction& rates, Rng& rng) {
  Path path;
  path.x0.assign(x0.begin(), x0.end());
  for (std::size_t j = 0; j < rates.size(); ++j) {
    sample_jump_times(rates, j, sample_poisson(rates[j].total(), rng), rng, path.events);
  }
  sort_events(path.events);
  return path;
}

Path apply_time_change(const Path& path, const TimeChange& u, std::size_t* collisions) {
  Path out;
  out.x0 = path.x0;
  out.events.reserve(path.events.size());
  for (const auto& e : path.events) {
    if (e.j >= u.size()) throw InputError("time change has fewer types than the path");
    out.events.push_back({u[e.j].inverse(e.t), e.j});
  }
  sort_events(out.events);
  if (collisions) {
    *collisions = 0;
    for (std::size_t k = 1; k < out.events.size(); ++k) {
      if (out.events[k].t == out.events[k - 1].t) ++*collisions;
    }
  }
  return out;
}

double log_time_change_density(const Path& path, const TimeChange& u, const RateFunction& rates) {
  double out = 0.0;
  for (const auto& e : path.events) {
    const Warp& w = u[e.j];
    out += std::log(rates.eval(e.j, w.eval(e.t)) * w.derivative(e.t) / rates.eval(e.j, e.t));
  }
  return out;
}

double time_change_density(const Path& path, const TimeChange& u, const RateFunction& rates) {
  return std::exp(log_time_change_density(path, u, rates));
}

double log_literal_density(const Path& path, const TimeChange& u, const RateFunction& rates) {
  double out = 0.0;
  for (const auto& e : path.events) {
    const Warp& w = u[e.j];
    out += w.derivative(e.t) * std::log(xi_invariant(rates, e.j, e.t, w.eval(e.t)));
  }
  return out;
}

std::vector<std::vector<double>> trace(const Path& path, const JumpModel& model, double t, double eps) {
  if (!(t >= 0.0 && eps >= 0.0 && t + eps <= 1.0 + 1e-15)) throw InputError("trace: need 0 <= t and t + eps <= 1");
  std::vector<std::vector<double>> out{std::vector<double>(model.dim(), 0.0)};
  for (const auto& e : path.events) {
    if (e.t <= t) continue;
    if (e.t > t + eps) break;
    auto next = out.back();
    const auto a = model.jump(e.j);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] += a[i];
    out.push_back(std::move(next));
  }
  return out;
}

bool cycle_hit(const Path& path, double t, double eps, const Cycle& cycle) {
  const auto& want = cycle.types();
  std::size_t k = 0;
  for (const auto& e : path.events) {
    if (e.t <= t) continue;
    if (e.t > t + eps) break;
    if (k == want.size() || e.j != want[k]) return false;
    ++k;
  }
  return k == want.size();
}

}  // namespace recip
