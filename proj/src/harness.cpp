// SPDX-License-Identifier: Apache-2.0
#include "recip/harness.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "recip/error.hpp"
#include "recip/parallel.hpp"
#include "recip/stats.hpp"

namespace recip {
namespace {

constexpr std::uint64_t kStreamLhs = 1;
constexpr std::uint64_t kStreamRhs = 2;
constexpr std::uint64_t kStreamShift = 3;

double sum_of_times(const Path& p) {
  double s = 0.0;
  for (const auto& e : p.events) s += e.t;
  return s;
}

// F1..F4 on one path, multiplied by `weight`.
void functionals(const Path& p, std::size_t n_jumps, const CountVector& nstar, double weight, double* out) {
  out[0] = weight * std::exp(-static_cast<double>(p.total()));
  out[1] = weight * (p.counts(n_jumps) == nstar ? 1.0 : 0.0);
  out[2] = weight * std::min(static_cast<double>(p.total(0.5)), 10.0);
  out[3] = weight * std::exp(-sum_of_times(p));
}

}  // namespace

McCompare mc_mean_compare(std::span<const double> x1, std::span<const double> x2, double z_crit, double atol) {
  if (x1.empty() || x2.empty()) throw InputError("mc_mean_compare: empty sample");
  const auto s1 = summarize(x1);
  const auto s2 = summarize(x2);
  McCompare r;
  r.n1 = static_cast<std::int64_t>(s1.n);
  r.n2 = static_cast<std::int64_t>(s2.n);
  r.m1 = s1.mean;
  r.m2 = s2.mean;
  r.se1 = s1.std_error;
  r.se2 = s2.std_error;
  const double diff = std::fabs(r.m1 - r.m2);
  const double se = std::sqrt(r.se1 * r.se1 + r.se2 * r.se2);
  if (se > 0.0) {
    r.z = diff / se;
  } else {
    r.z = diff > atol ? std::numeric_limits<double>::infinity() : 0.0;
  }
  r.pass = r.z <= z_crit || diff <= atol;
  return r;
}

const char* to_string(Reading r) { return r == Reading::girsanov ? "girsanov" : "literal"; }

Reading parse_reading(const std::string& s) {
  if (s == "girsanov") return Reading::girsanov;
  if (s == "literal") return Reading::literal;
  throw InputError("reading must be girsanov or literal, got '" + s + "'");
}

TimeChangeReport verify_time_change(const RateFunction& rates, const TimeChange& u, const TimeChangeConfig& cfg) {
  const std::size_t a = rates.size();
  if (u.size() != a) throw InputError("time change and rates disagree on the number of jump types");
  if (cfg.nstar.size() != a) throw InputError("n* must have one entry per jump type");
  if (cfg.n <= 1) throw InputError("verify_time_change: need at least two replicates");
  const auto n = static_cast<std::size_t>(cfg.n);
  const std::vector<double> x0;

  std::vector<double> lhs(4 * n), rhs(4 * n);
  std::vector<std::size_t> collisions(n, 0);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    double f[4];
    {
      Rng rng(derive_seed(cfg.seed, kStreamLhs, i));
      const Path moved = apply_time_change(sample_cpp(x0, rates, rng), u, &collisions[i]);
      functionals(moved, a, cfg.nstar, 1.0, f);
      for (int k = 0; k < 4; ++k) lhs[static_cast<std::size_t>(k) * n + i] = f[k];
    }
    {
      Rng rng(derive_seed(cfg.seed, kStreamRhs, i));
      const Path p = sample_cpp(x0, rates, rng);
      const double log_d =
          cfg.reading == Reading::girsanov ? log_time_change_density(p, u, rates) : log_literal_density(p, u, rates);
      functionals(p, a, cfg.nstar, std::exp(log_d), f);
      for (int k = 0; k < 4; ++k) rhs[static_cast<std::size_t>(k) * n + i] = f[k];
    }
  });

  TimeChangeReport report;
  report.reading = cfg.reading;
  for (auto c : collisions) report.collisions += c;
  report.pass = true;
  static const char* names[4] = {"F1", "F2", "F3", "F4"};
  for (std::size_t k = 0; k < 4; ++k) {
    auto cmp = mc_mean_compare(std::span(lhs).subspan(k * n, n), std::span(rhs).subspan(k * n, n), cfg.z_crit, cfg.atol);
    cmp.name = names[k];
    report.pass = report.pass && cmp.pass;
    report.tests.push_back(std::move(cmp));
  }
  return report;
}

CountSource free_count_source(const RateFunction& rates) {
  const auto lambda = rates.lambdas();
  return [lambda](Rng& rng) {
    CountVector n(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) n[j] = sample_poisson(lambda[j], rng);
    return n;
  };
}

CountSource mixture_count_source(const MixtureSampler& sampler) {
  return [&sampler](Rng& rng) { return sampler.sample_counts(rng); };
}

ShiftN1Report verify_shift_N1(const CountSource& source, const RateFunction& rates, const JumpModel& model,
                              const std::vector<LatticeVector>& gamma, const ShiftConfig& cfg) {
  const std::size_t a = model.n_jumps();
  if (rates.size() != a) throw InputError("rates and model disagree on the number of jump types");
  for (const auto& c : gamma) {
    if (!in_kernel(model, c)) throw InputError("shift check: generator is not in ker_Z(A)");
  }
  if (cfg.n <= 0) throw InputError("verify_shift_N1: need at least one replicate");
  const auto n = static_cast<std::size_t>(cfg.n);

  std::vector<std::int64_t> flat(n * a);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, kStreamShift, i));
    const CountVector v = source(rng);
    std::copy(v.begin(), v.end(), flat.begin() + static_cast<std::ptrdiff_t>(i * a));
  });
  std::map<CountVector, std::int64_t> hist;
  for (std::size_t i = 0; i < n; ++i) {
    ++hist[CountVector(flat.begin() + static_cast<std::ptrdiff_t>(i * a),
                       flat.begin() + static_cast<std::ptrdiff_t>((i + 1) * a))];
  }

  const double nn = static_cast<double>(n);
  ShiftN1Report report;
  for (const auto& c : gamma) {
    const double log_phi = log_phi_invariant(rates, model, c);
    for (const auto& [m, count] : hist) {
      if (count < cfg.min_count) continue;
      CountVector down(a);
      bool ok = true;
      for (std::size_t j = 0; j < a && ok; ++j) {
        Integer x = Integer(static_cast<long>(m[j])) - c[j];
        ok = x >= 0;
        if (ok) down[j] = x.get_si();
      }
      if (!ok) continue;
      ShiftPair p;
      p.c = c;
      p.m = m;
      p.count_m = count;
      auto it = hist.find(down);
      p.count_shifted = it == hist.end() ? 0 : it->second;
      const double pa = static_cast<double>(p.count_shifted) / nn;
      const double pb = static_cast<double>(count) / nn;
      const double k = std::exp(log_phi + log_shift_density(c, m));
      p.lhs = pa;
      p.rhs = k * pb;
      // Multinomial cells: Cov(pa, pb) = -pa pb / n.
      const double var = (pa * (1.0 - pa) + k * k * pb * (1.0 - pb) + 2.0 * k * pa * pb) / nn;
      const double diff = std::fabs(p.lhs - p.rhs);
      p.z = var > 0.0 ? diff / std::sqrt(var) : (diff > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      if (!report.worst || p.z > report.worst_z) {
        report.worst_z = p.z;
        report.worst = p;
      }
      report.pairs.push_back(std::move(p));
    }
  }
  report.pass = report.worst_z <= cfg.z_crit;
  return report;
}

const char* to_string(CtdnsVariant v) { return v == CtdnsVariant::paper ? "paper" : "derived"; }

CtdnsVariant parse_variant(const std::string& s) {
  if (s == "paper") return CtdnsVariant::paper;
  if (s == "derived") return CtdnsVariant::derived;
  throw InputError("variant must be paper or derived, got '" + s + "'");
}

CtdnsReport verify_ctdns(const RateFunction& rates, const JumpModel& model, double t, const LatticeVector& c,
                         CtdnsVariant variant, double delta) {
  if (!rates.homogeneous()) throw UnsupportedError("the time-t shift check needs time-homogeneous rates");
  if (!(t > 0.0 && t <= 1.0)) throw InputError("t must lie in (0,1]");
  CtdnsReport r;
  r.variant = variant;
  r.t = t;
  r.c = c;
  const double log_phi = log_phi_invariant(rates, model, c);
  double len = 0.0;
  for (const auto& x : c) len += x.get_d();
  const double base = variant == CtdnsVariant::paper ? 1.0 - t : t;
  if (base <= 0.0) {
    // (1 - t)^{-|c|} has no value at t = 1.
    r.factor_defined = false;
    r.log_k = std::numeric_limits<double>::quiet_NaN();
    r.max_residual = std::numeric_limits<double>::infinity();
    r.pass = false;
    return r;
  }
  r.log_k = log_phi - len * std::log(base);
  auto lambda_t = rates.lambdas();
  for (auto& l : lambda_t) l *= t;
  const auto rho = truncate_pois(lambda_t, delta);
  const auto shift = check_shift_residual(rho, c, r.log_k);
  r.max_residual = shift.max_residual;
  r.worst = shift.worst;
  r.pass = r.max_residual < kExactTolerance;
  return r;
}

ChenReport verify_chen(std::span<const double> lambda, const std::vector<LatticeVector>& cs, double delta) {
  ChenReport r;
  const auto rho = truncate_pois(lambda, delta);
  for (const auto& c : cs) {
    auto s = check_shift_identity(rho, lambda, c);
    r.max_residual = std::max(r.max_residual, s.max_residual);
    r.shifts.push_back(std::move(s));
  }
  r.pass = r.max_residual < kExactTolerance;
  return r;
}

}  // namespace recip
