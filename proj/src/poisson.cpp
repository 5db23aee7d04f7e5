// SPDX-License-Identifier: Apache-2.0
#include "recip/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "recip/error.hpp"
#include "recip/simd/kernels.hpp"

namespace recip {
namespace {

void require_rates(std::span<const double> lambda) {
  for (double l : lambda) {
    if (!(l > 0.0) || !std::isfinite(l)) throw InputError("Poisson parameters must be positive and finite");
  }
}

}  // namespace

double SparseDistribution::at(const CountVector& n) const {
  auto it = weights.find(n);
  return it == weights.end() ? 0.0 : it->second;
}

double SparseDistribution::total() const {
  double s = 0.0;
  for (const auto& [n, w] : weights) s += w;
  return s;
}

void SparseDistribution::validate() const {
  std::size_t len = weights.empty() ? 0 : weights.begin()->first.size();
  for (const auto& [n, w] : weights) {
    if (n.size() != len) throw InputError("distribution: support vectors have different lengths");
    if (std::any_of(n.begin(), n.end(), [](std::int64_t x) { return x < 0; })) {
      throw InputError("distribution: support point with a negative coordinate");
    }
    if (!(w >= 0.0) || !std::isfinite(w)) throw InputError("distribution: weights must be finite and nonnegative");
  }
  if (!(tail_bound >= 0.0)) throw InputError("distribution: negative tail bound");
}

double log_pois_pmf(std::span<const double> lambda, std::span<const std::int64_t> n) {
  if (lambda.size() != n.size()) throw InputError("pois_pmf: length mismatch");
  require_rates(lambda);
  double out = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    if (n[j] < 0) return -std::numeric_limits<double>::infinity();
    const double k = static_cast<double>(n[j]);
    out += -lambda[j] + k * std::log(lambda[j]) - std::lgamma(k + 1.0);
  }
  return out;
}

double pois_pmf(std::span<const double> lambda, std::span<const std::int64_t> n) {
  return std::exp(log_pois_pmf(lambda, n));
}

double pois_upper_tail(double lambda, std::int64_t m) {
  // Terms decrease once k > lambda; stop when they no longer move the sum.
  double sum = 0.0;
  for (std::int64_t k = m + 1;; ++k) {
    const double kd = static_cast<double>(k);
    const double term = std::exp(-lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0));
    sum += term;
    if (kd > lambda && term <= sum * 1e-17) break;
  }
  return sum;
}

CountVector truncation_box(std::span<const double> lambda, double delta) {
  require_rates(lambda);
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("truncation tolerance must lie in (0,1)");
  const double per = delta / static_cast<double>(lambda.size());
  CountVector box(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    std::int64_t m = 0;
    while (pois_upper_tail(lambda[j], m) >= per) ++m;
    box[j] = m;
  }
  return box;
}

SparseDistribution truncate_pois(std::span<const double> lambda, double delta) {
  const CountVector box = truncation_box(lambda, delta);
  SparseDistribution out;
  out.box = box;
  for (std::size_t j = 0; j < lambda.size(); ++j) out.tail_bound += pois_upper_tail(lambda[j], box[j]);

  // Product of one-dimensional pmfs over the box.
  std::vector<std::vector<double>> marg(lambda.size());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    for (std::int64_t k = 0; k <= box[j]; ++k) {
      const double kd = static_cast<double>(k);
      marg[j].push_back(-lambda[j] + kd * std::log(lambda[j]) - std::lgamma(kd + 1.0));
    }
  }
  CountVector n(lambda.size(), 0);
  for (;;) {
    double lp = 0.0;
    for (std::size_t j = 0; j < n.size(); ++j) lp += marg[j][static_cast<std::size_t>(n[j])];
    out.weights.emplace_hint(out.weights.end(), n, std::exp(lp));
    std::size_t j = n.size();
    while (j > 0) {
      --j;
      if (n[j] < box[j]) {
        ++n[j];
        break;
      }
      n[j] = 0;
      if (j == 0) return out;
    }
  }
}

double log_lambda_power(std::span<const double> lambda, const LatticeVector& c) {
  if (lambda.size() != c.size()) throw InputError("lambda and c have different lengths");
  double out = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) out += c[j].get_d() * std::log(lambda[j]);
  return out;
}

double log_shift_density(const LatticeVector& c, std::span<const std::int64_t> n) {
  if (c.size() != n.size()) throw InputError("shift density: length mismatch");
  double out = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double nj = static_cast<double>(n[j]);
    const double cj = c[j].get_d();
    if (cj > nj) return -std::numeric_limits<double>::infinity();
    out += std::lgamma(nj + 1.0) - std::lgamma(nj - cj + 1.0);
  }
  return out;
}

ShiftReport check_shift_residual(const SparseDistribution& rho, const LatticeVector& c, double log_k) {
  ShiftReport report;
  report.c = c;
  // Points n where either side can be nonzero: n in support, or n - c in support.
  std::vector<CountVector> points;
  for (const auto& [n, w] : rho.weights) {
    if (n.size() != c.size()) throw InputError("shift check: c has the wrong length");
    points.push_back(n);
    CountVector up(n.size());
    bool ok = true;
    for (std::size_t j = 0; j < n.size() && ok; ++j) {
      Integer x = c[j] + static_cast<long>(n[j]);
      ok = x >= 0 && x.fits_slong_p();
      if (ok) up[j] = x.get_si();
    }
    if (ok) points.push_back(std::move(up));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  auto inside = [&](const CountVector& n) {
    if (!rho.box) return true;
    for (std::size_t j = 0; j < n.size(); ++j) {
      if (n[j] > (*rho.box)[j]) return false;
    }
    return true;
  };
  std::vector<CountVector> used;
  std::vector<double> lhs, scale, rhs;
  for (auto& n : points) {
    CountVector down(n.size());
    bool ok = true;
    for (std::size_t j = 0; j < n.size() && ok; ++j) {
      Integer x = Integer(static_cast<long>(n[j])) - c[j];
      ok = x >= 0 && x.fits_slong_p();
      if (ok) down[j] = x.get_si();
    }
    if (!ok) continue;
    if (!inside(n) || !inside(down)) continue;
    lhs.push_back(rho.at(down));
    scale.push_back(std::exp(log_k + log_shift_density(c, n)));
    rhs.push_back(rho.at(n));
    used.push_back(std::move(n));
  }
  report.points = used.size();
  report.max_residual = simd::max_abs_residual(lhs, scale, rhs);
  for (std::size_t i = 0; i < used.size(); ++i) {
    if (std::fabs(lhs[i] - scale[i] * rhs[i]) == report.max_residual) {
      report.worst = used[i];
      break;
    }
  }
  return report;
}

ShiftReport check_shift_identity(const SparseDistribution& rho, std::span<const double> lambda, const LatticeVector& c) {
  require_rates(lambda);
  return check_shift_residual(rho, c, -log_lambda_power(lambda, c));
}

MembershipReport check_class_membership(const SparseDistribution& rho, const SparseDistribution& mu,
                                        const JumpModel& model, double tolerance) {
  MembershipReport report;
  struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    CountVector lo_at, hi_at;
  };
  std::map<IntegerRow, Range> fibers;
  auto visit = [&](const CountVector& n) {
    const double m = mu.at(n);
    const double r = rho.at(n);
    if (m <= 0.0) {
      if (r > 0.0) report.ac_violations.push_back(n);
      return;
    }
    const double ratio = r / m;
    auto& range = fibers[model.image(n)];
    if (ratio < range.lo) range.lo = ratio, range.lo_at = n;
    if (ratio > range.hi) range.hi = ratio, range.hi_at = n;
  };
  for (const auto& [n, w] : mu.weights) visit(n);
  for (const auto& [n, w] : rho.weights) {
    if (!mu.weights.count(n)) visit(n);
  }
  report.fibers = fibers.size();
  for (const auto& [key, range] : fibers) {
    const double spread = range.hi - range.lo;
    if (!report.worst_fiber_point || spread > report.max_spread) {
      report.max_spread = spread;
      report.worst_fiber_point = range.hi_at;
    }
  }
  report.member = report.ac_violations.empty() && report.max_spread < tolerance;
  return report;
}

CounterexampleReport counterexample_345(double eps, std::span<const double> lambda, double delta) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0,1)");
  if (lambda.size() != 3) throw InputError("the 345 preset needs three rates");
  require_rates(lambda);

  const auto model = JumpModel::from_integer_columns({{3}, {4}, {5}});
  const auto basis = kernel_basis(model);
  CounterexampleReport out;
  out.basis = basis.vectors();

  struct Candidate {
    LatticeVector v;
    CountVector n;
  };
  const std::vector<Candidate> candidates = {
      {to_lattice(CountVector{-3, 1, 1}), {3, 0, 0}},
      {to_lattice(CountVector{1, -2, 1}), {0, 2, 0}},
      {to_lattice(CountVector{2, 1, -2}), {0, 0, 2}},
  };
  auto in_pm_basis = [&](const LatticeVector& v) {
    for (const auto& b : out.basis) {
      LatticeVector neg = b;
      for (auto& x : neg) x = -x;
      if (v == b || v == neg) return true;
    }
    return false;
  };
  auto chosen = std::find_if(candidates.begin(), candidates.end(), [&](const Candidate& c) { return !in_pm_basis(c.v); });
  if (chosen == candidates.end()) throw UnsupportedError("every candidate move lies in +-basis");
  out.v = chosen->v;
  out.n_v = chosen->n;

  // The fiber of n_v is finite; its points minus n_v are exactly the feasible moves.
  for (const auto& m : fiber_points(model, out.n_v, *default_box(model, out.n_v))) {
    LatticeVector c(3);
    for (std::size_t j = 0; j < 3; ++j) c[j] = static_cast<long>(m[j] - out.n_v[j]);
    out.feasible_moves.push_back(std::move(c));
  }
  std::sort(out.feasible_moves.begin(), out.feasible_moves.end());
  {
    std::vector<LatticeVector> expect = {LatticeVector(3, 0), out.v};
    std::sort(expect.begin(), expect.end());
    out.unique_move = out.feasible_moves == expect;
  }

  const auto mu = truncate_pois(lambda, delta);
  out.rho.tail_bound = (1.0 - eps) * mu.tail_bound;
  out.rho.box = mu.box;
  for (const auto& [n, w] : mu.weights) out.rho.weights[n] = (1.0 - eps) * w;
  out.rho.weights[out.n_v] += eps;
  out.p_nv = pois_pmf(lambda, out.n_v);

  out.shifts_pass = true;
  for (const auto& b : out.basis) {
    for (int sign : {1, -1}) {
      LatticeVector c = b;
      if (sign < 0) {
        for (auto& x : c) x = -x;
      }
      auto r = check_shift_identity(out.rho, lambda, c);
      out.shifts_pass = out.shifts_pass && r.max_residual < kExactTolerance;
      out.shifts.push_back(std::move(r));
    }
  }
  out.membership = check_class_membership(out.rho, mu, model);
  return out;
}

}  // namespace recip
