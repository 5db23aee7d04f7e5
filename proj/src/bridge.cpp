// SPDX-License-Identifier: Apache-2.0
#include "recip/bridge.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <charconv>
#include <cstdio>
#include <limits>
#include <sstream>

#include "recip/error.hpp"
#include "recip/parallel.hpp"

namespace recip {
namespace {

std::string show(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

std::string show_counts(const LatticeVector& v) {
  std::string out = "(";
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i].get_str();
  return out + ")";
}

void require_types(const RateFunction& rates, const JumpModel& model) {
  if (rates.size() != model.n_jumps()) {
    throw InputError("rates define " + std::to_string(rates.size()) + " jump types, model has " +
                     std::to_string(model.n_jumps()));
  }
}

std::vector<double> difference(std::span<const double> x, std::span<const double> y, std::size_t dim) {
  if (x.size() != dim || y.size() != dim) throw InputError("endpoints must have dimension " + std::to_string(dim));
  std::vector<double> d(dim);
  for (std::size_t i = 0; i < dim; ++i) d[i] = y[i] - x[i];
  return d;
}

}  // namespace

void EndpointMixture::validate(const JumpModel& model) const {
  if (entries.empty()) throw InputError("mixture: no endpoint pairs");
  double total = 0.0;
  for (const auto& e : entries) {
    if (e.x.size() != model.dim() || e.y.size() != model.dim()) {
      throw InputError("mixture: endpoints must have dimension " + std::to_string(model.dim()));
    }
    if (!(e.w > 0.0)) throw InputError("mixture: weights must be positive");
    total += e.w;
  }
  if (std::fabs(total - 1.0) > 1e-9) throw InputError("mixture: weights must sum to 1");
}

double log_phi_invariant(const RateFunction& rates, const JumpModel& model, const LatticeVector& c) {
  require_types(rates, model);
  if (!in_kernel(model, c)) throw InputError("phi: c is not in ker_Z(A)");
  return -log_lambda_power(rates.lambdas(), c);
}

double phi_invariant(const RateFunction& rates, const JumpModel& model, const LatticeVector& c) {
  return std::exp(log_phi_invariant(rates, model, c));
}

IntegerRow resolve_displacement(const JumpModel& model, std::span<const double> x, std::span<const double> y,
                                const CountVector& box) {
  const auto d = difference(x, y, model.dim());
  if (model.layers().size() == 1) {
    IntegerRow key(model.dim());
    for (std::size_t i = 0; i < model.dim(); ++i) {
      const double scaled = model.row_scales()[i].get_d() * d[i];
      const double nearest = std::nearbyint(scaled);
      if (std::fabs(scaled - nearest) > 1e-9 * std::max(1.0, std::fabs(scaled))) {
        std::ostringstream msg;
        msg << "(x,y) not in S: y - x = " << show(d) << " is off the jump lattice in coordinate " << i + 1
            << " (residual " << std::fabs(scaled - nearest) << " after scaling by " << model.row_scales()[i] << ")";
        throw InfeasibleError(msg.str());
      }
      key[i] = Integer(nearest);
    }
    return key;
  }

  // Irrational layers: the displacement cannot be split exactly, so look for a
  // count vector in the box that reproduces it.
  double scale = 1.0;
  for (double v : d) scale = std::max(scale, std::fabs(v));
  CountVector n(model.n_jumps(), 0);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    const auto pos = model.displace(std::vector<double>(model.dim(), 0.0), n);
    double residual = 0.0;
    for (std::size_t i = 0; i < model.dim(); ++i) residual = std::max(residual, std::fabs(pos[i] - d[i]));
    if (residual <= 1e-9 * scale) return model.image(n);
    best = std::min(best, residual);
    std::size_t j = n.size();
    while (j > 0) {
      --j;
      if (n[j] < box[j]) {
        ++n[j];
        break;
      }
      n[j] = 0;
      if (j == 0) {
        std::ostringstream msg;
        msg << "(x,y) not in S: no count vector within the truncation box reaches y - x = " << show(d)
            << " (smallest max-norm residual " << best << ")";
        throw InfeasibleError(msg.str());
      }
    }
  }
}

SparseDistribution conditional_fiber_dist(const RateFunction& rates, const JumpModel& model, std::span<const double> x,
                                          std::span<const double> y, double delta) {
  require_types(rates, model);
  const auto lambda = rates.lambdas();
  const CountVector box = truncation_box(lambda, delta);
  const IntegerRow key = resolve_displacement(model, x, y, box);
  const auto anchor = solve_integer(model.stacked(), key);
  if (!anchor) {
    throw InfeasibleError("(x,y) not in S: y - x = " + show(difference(x, y, model.dim())) +
                          " has no integer count preimage");
  }
  const auto points = fiber_points_at(model, *anchor, box);
  if (points.empty()) {
    CountVector wide(box.size());
    for (std::size_t j = 0; j < box.size(); ++j) wide[j] = 4 * box[j] + 10;
    bool reachable = false;
    try {
      reachable = !fiber_points_at(model, *anchor, wide).empty();
    } catch (const ResourceError&) {
    }
    const std::string d = show(difference(x, y, model.dim()));
    if (reachable) {
      throw InfeasibleError("endpoint fiber for y - x = " + d +
                            " carries less mass than the truncation tolerance; raise delta");
    }
    throw InfeasibleError("(x,y) not in S: no nonnegative count vector reaches y - x = " + d +
                          "; integer solutions such as " + show_counts(*anchor) + " have negative entries");
  }

  std::vector<double> logs;
  logs.reserve(points.size());
  for (const auto& n : points) logs.push_back(log_pois_pmf(lambda, n));
  const double top = *std::max_element(logs.begin(), logs.end());
  double z = 0.0;
  for (double l : logs) z += std::exp(l - top);

  SparseDistribution out;
  for (std::size_t i = 0; i < points.size(); ++i) out.weights.emplace(points[i], std::exp(logs[i] - top) / z);
  double tail = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) tail += pois_upper_tail(lambda[j], box[j]);
  out.tail_bound = std::min(1.0, tail / (z * std::exp(top)));
  return out;
}

BridgeSampler::BridgeSampler(const RateFunction& rates, const JumpModel& model, std::vector<double> x,
                             std::vector<double> y, double delta)
    : rates_(rates), x_(std::move(x)), y_(std::move(y)) {
  dist_ = conditional_fiber_dist(rates, model, x_, y_, delta);
  key_ = model.image(dist_.weights.begin()->first);
  double acc = 0.0;
  for (const auto& [n, w] : dist_.weights) {
    acc += w;
    points_.push_back(n);
    cumulative_.push_back(acc);
  }
}

CountVector BridgeSampler::sample_counts(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  const auto k = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), points_.size() - 1);
  return points_[k];
}

Path BridgeSampler::sample(Rng& rng) const {
  const CountVector n = sample_counts(rng);
  Path path;
  path.x0 = x_;
  for (std::size_t j = 0; j < n.size(); ++j) sample_jump_times(rates_, j, n[j], rng, path.events);
  sort_events(path.events);
  return path;
}

MixtureSampler::MixtureSampler(const RateFunction& rates, const JumpModel& model, const EndpointMixture& mix,
                               double delta) {
  mix.validate(model);
  double acc = 0.0;
  for (const auto& e : mix.entries) {
    bridges_.emplace_back(rates, model, e.x, e.y, delta);
    acc += e.w;
    cumulative_.push_back(acc);
  }
}

std::size_t MixtureSampler::pick(Rng& rng) const {
  // A single entry consumes no draw, so it replays its bridge stream exactly.
  if (bridges_.size() == 1) return 0;
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()), bridges_.size() - 1);
}

Path MixtureSampler::sample(Rng& rng) const { return bridges_[pick(rng)].sample(rng); }

CountVector MixtureSampler::sample_counts(Rng& rng) const { return bridges_[pick(rng)].sample_counts(rng); }

Path sample_bridge(const RateFunction& rates, const JumpModel& model, std::span<const double> x,
                   std::span<const double> y, Rng& rng) {
  BridgeSampler sampler(rates, model, {x.begin(), x.end()}, {y.begin(), y.end()});
  return sampler.sample(rng);
}

Path sample_reciprocal(const RateFunction& rates, const JumpModel& model, const EndpointMixture& mix, Rng& rng) {
  MixtureSampler sampler(rates, model, mix);
  return sampler.sample(rng);
}

namespace {

SameClassReport compare_phi(const RateFunction& rates1, const RateFunction& rates2, const JumpModel& model) {
  require_types(rates1, model);
  require_types(rates2, model);
  SameClassReport r;
  const auto basis = kernel_basis(model);
  r.basis = basis.vectors();
  const auto l1 = rates1.lambdas();
  const auto l2 = rates2.lambdas();
  r.phi_equal = true;
  for (const auto& c : r.basis) {
    const double diff = log_lambda_power(l2, c) - log_lambda_power(l1, c);
    r.log_phi_diff.push_back(diff);
    r.phi_equal = r.phi_equal && std::fabs(diff) < kPhiTolerance;
  }
  const auto a = static_cast<Eigen::Index>(model.n_jumps());
  const auto k = static_cast<Eigen::Index>(r.basis.size());
  if (k > 0) {
    Eigen::MatrixXd K(a, k);
    Eigen::VectorXd d(a);
    for (Eigen::Index j = 0; j < a; ++j) {
      d(j) = std::log(l1[static_cast<std::size_t>(j)]) - std::log(l2[static_cast<std::size_t>(j)]);
      for (Eigen::Index i = 0; i < k; ++i) K(j, i) = r.basis[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].get_d();
    }
    const Eigen::VectorXd coef = (K.transpose() * K).ldlt().solve(K.transpose() * d);
    r.projection_residual = (K * coef).norm();
  }
  r.homogeneous = rates1.homogeneous() && rates2.homogeneous();
  return r;
}

}  // namespace

SameClassReport same_class(const RateFunction& rates1, const RateFunction& rates2, const JumpModel& model) {
  if (!rates1.homogeneous() || !rates2.homogeneous()) {
    throw UnsupportedError("same_class needs time-homogeneous rates; use the general check");
  }
  auto r = compare_phi(rates1, rates2, model);
  r.same = r.phi_equal;
  return r;
}

SameClassReport same_class_general(const RateFunction& rates1, const RateFunction& rates2, const JumpModel& model) {
  auto r = compare_phi(rates1, rates2, model);
  constexpr int kGrid = 1024;
  r.xi_max_diff = 0.0;
  for (std::size_t j = 0; j < model.n_jumps(); ++j) {
    double lo = INFINITY, hi = -INFINITY;
    for (int i = 0; i < kGrid; ++i) {
      const double t = static_cast<double>(i) / (kGrid - 1);
      const double g = std::log(rates1.eval(j, t)) - std::log(rates2.eval(j, t));
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    r.xi_max_diff = std::max(r.xi_max_diff, hi - lo);
  }
  r.xi_equal = r.xi_max_diff < kPhiTolerance;
  r.same = r.xi_equal && r.phi_equal;
  return r;
}

double cycle_prob_exact(const RateFunction& rates, const Cycle& cycle, double eps) {
  if (!rates.homogeneous()) throw UnsupportedError("cycle_prob_exact needs time-homogeneous rates");
  if (!(eps > 0.0 && eps <= 1.0)) throw InputError("eps must lie in (0,1]");
  const auto& c = cycle.counts();
  if (c.size() != rates.size()) throw InputError("cycle and rates disagree on the number of jump types");
  const auto nu = rates.lambdas();
  double total = 0.0, log_prod = 0.0;
  for (std::size_t j = 0; j < nu.size(); ++j) {
    total += nu[j];
    log_prod += static_cast<double>(c[j]) * std::log(nu[j]);
  }
  const double len = static_cast<double>(cycle.length());
  return std::exp(-eps * total + len * std::log(eps) + log_prod - std::lgamma(len + 1.0));
}

double cycle_limit(const RateFunction& rates, const JumpModel& model, const Cycle& cycle, double eps) {
  const double len = static_cast<double>(cycle.length());
  const double log_phi = log_phi_invariant(rates, model, to_lattice(cycle.counts()));
  return std::exp(len * std::log(eps) - log_phi - std::lgamma(len + 1.0));
}

std::vector<CycleRow> cycle_asymptotics_estimate(const PathSource& source, const Cycle& cycle, double t,
                                                 const std::vector<double>& eps, std::int64_t n, std::uint64_t seed,
                                                 double z, const std::function<double(double)>& limit,
                                                 unsigned threads) {
  if (eps.empty() || eps.size() > 32) throw InputError("cycle asymptotics: between 1 and 32 eps values");
  if (n < 0) throw InputError("cycle asymptotics: negative replicate count");
  for (double e : eps) {
    if (!(e > 0.0) || !(t >= 0.0) || t + e > 1.0 + 1e-12) throw InputError("cycle asymptotics: need t + eps <= 1");
  }
  std::vector<std::uint32_t> hit_bits(static_cast<std::size_t>(n), 0);
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t i) {
    Rng rng(derive_seed(seed, 0, i));
    const Path path = source(rng);
    std::uint32_t bits = 0;
    for (std::size_t k = 0; k < eps.size(); ++k) {
      if (cycle_hit(path, t, eps[k], cycle)) bits |= 1u << k;
    }
    hit_bits[i] = bits;
  });

  std::vector<CycleRow> rows;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    CycleRow r;
    r.eps = eps[k];
    r.n = n;
    for (auto b : hit_bits) r.hits += (b >> k) & 1u;
    r.p_hat = n > 0 ? static_cast<double>(r.hits) / static_cast<double>(n) : 0.0;
    const auto ci = wilson_interval(r.hits, n, z);
    r.ci_lo = ci.lo;
    r.ci_hi = ci.hi;
    r.ratio_to_limit = r.p_hat / limit(eps[k]);
    rows.push_back(r);
  }
  return rows;
}

std::string cycle_table_csv(const std::vector<CycleRow>& rows) {
  std::string out = "eps,n,hits,p_hat,ci_lo,ci_hi,ratio_to_limit\n";
  auto put = [&out](auto v, char sep) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, res.ptr);
    out += sep;
  };
  for (const auto& r : rows) {
    put(r.eps, ',');
    put(r.n, ',');
    put(r.hits, ',');
    put(r.p_hat, ',');
    put(r.ci_lo, ',');
    put(r.ci_hi, ',');
    put(r.ratio_to_limit, '\n');
  }
  return out;
}

}  // namespace recip
