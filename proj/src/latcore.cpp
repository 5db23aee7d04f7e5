// SPDX-License-Identifier: Apache-2.0
#include "recip/latcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "recip/error.hpp"

namespace recip {
namespace {

using i128 = __int128;

bool fits_int64(const Integer& x) { return x.fits_slong_p() != 0; }

std::string format_vector(const LatticeVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].get_str();
  }
  return s + ")";
}

void check_box(const CountVector& n0, const CountVector& box, std::size_t n_jumps) {
  if (n0.size() != n_jumps || box.size() != n_jumps) {
    throw InputError("fiber_points: n0 and box must have length " + std::to_string(n_jumps));
  }
  for (std::size_t j = 0; j < n_jumps; ++j) {
    if (n0[j] < 0 || box[j] < 0 || n0[j] > box[j]) throw InputError("fiber_points: n0 must lie in [0, box]");
  }
}

// Plain scan of the box with an incremental image odometer.
std::vector<CountVector> scan_box(const JumpModel& model, const LatticeVector& anchor, const CountVector& box) {
  const auto& M = model.stacked();
  const std::size_t rows = M.size();
  const std::size_t a = model.n_jumps();
  std::vector<std::vector<i128>> col(a, std::vector<i128>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < a; ++j) col[j][r] = static_cast<i128>(M[r][j].get_si());
  }
  std::vector<i128> target(rows, 0), img(rows, 0);
  const IntegerRow key = model.image(anchor);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!key[r].fits_slong_p()) return {};  // unreachable from a box of this size
    target[r] = key[r].get_si();
  }

  std::vector<CountVector> out;
  CountVector m(a, 0);
  for (;;) {
    if (img == target) out.push_back(m);
    std::size_t j = a;
    while (j > 0) {
      --j;
      if (m[j] < box[j]) {
        ++m[j];
        for (std::size_t r = 0; r < rows; ++r) img[r] += col[j][r];
        break;
      }
      for (std::size_t r = 0; r < rows; ++r) img[r] -= col[j][r] * box[j];
      m[j] = 0;
      if (j == 0) return out;
    }
    if (a == 0) return out;
  }
}

struct EchelonWalk {
  const IntegerMatrix& basis;
  const std::vector<std::size_t>& pivots;
  const CountVector& box;
  std::vector<CountVector>& out;
  double visited = 0;

  bool columns_ok(const IntegerRow& cur, std::size_t from, std::size_t to) const {
    for (std::size_t q = from; q < to; ++q) {
      if (cur[q] < 0 || cur[q] > box[q]) return false;
    }
    return true;
  }

  void run(IntegerRow& cur, std::size_t depth) {
    if (++visited > kFiberScanLimit) {
      throw ResourceError("fiber enumeration exceeded " + std::to_string(static_cast<long long>(kFiberScanLimit)) +
                          " nodes; shrink the box");
    }
    const std::size_t from = depth == 0 ? 0 : pivots[depth - 1] + 1;
    if (depth == basis.size()) {
      if (!columns_ok(cur, from, cur.size())) return;
      CountVector m(cur.size());
      for (std::size_t q = 0; q < cur.size(); ++q) m[q] = cur[q].get_si();
      out.push_back(std::move(m));
      return;
    }
    const std::size_t p = pivots[depth];
    if (!columns_ok(cur, from, p)) return;
    const Integer& b = basis[depth][p];
    Integer lo, hi;
    Integer neg = -cur[p];
    mpz_cdiv_q(lo.get_mpz_t(), neg.get_mpz_t(), b.get_mpz_t());
    Integer room = Integer(static_cast<long>(box[p])) - cur[p];
    mpz_fdiv_q(hi.get_mpz_t(), room.get_mpz_t(), b.get_mpz_t());
    if (lo > hi) return;
    const auto& row = basis[depth];
    // Move to z = lo, then step by one row at a time.
    for (std::size_t q = 0; q < cur.size(); ++q) cur[q] += lo * row[q];
    for (Integer z = lo;; ++z) {
      run(cur, depth + 1);
      if (z == hi) break;
      for (std::size_t q = 0; q < cur.size(); ++q) cur[q] += row[q];
    }
    for (std::size_t q = 0; q < cur.size(); ++q) cur[q] -= hi * row[q];
  }
};

}  // namespace

LatticeVector to_lattice(std::span<const std::int64_t> v) {
  LatticeVector out;
  out.reserve(v.size());
  for (auto x : v) out.emplace_back(static_cast<long>(x));
  return out;
}

CountVector to_counts(const LatticeVector& v) {
  CountVector out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if (!fits_int64(x)) throw InputError("integer " + x.get_str() + " does not fit in 64 bits");
    out.push_back(x.get_si());
  }
  return out;
}

std::optional<double> known_constant(const std::string& label) {
  static const std::map<std::string, double> table = {
      {"1", 1.0},
      {"sqrt2", std::numbers::sqrt2},
      {"sqrt3", std::numbers::sqrt3},
      {"sqrt5", std::sqrt(5.0)},
      {"pi", std::numbers::pi},
      {"e", std::numbers::e},
  };
  auto it = table.find(label);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

JumpModel::JumpModel(std::size_t dim, std::size_t n_jumps, std::vector<Layer> layers)
    : dim_(dim), n_jumps_(n_jumps), layers_(std::move(layers)) {
  if (dim_ == 0 || n_jumps_ == 0) throw InputError("model: dim and jumps must be positive");
  if (layers_.empty()) throw InputError("model: at least one layer is required");
  if (layers_.front().constant != "1") throw InputError("model: the first layer must have constant \"1\"");
  std::set<std::string> labels;
  for (const auto& layer : layers_) {
    if (!labels.insert(layer.constant).second) throw InputError("model: duplicate layer constant '" + layer.constant + "'");
    if (layer.matrix.size() != dim_) throw InputError("model: layer '" + layer.constant + "' must have dim rows");
    for (const auto& row : layer.matrix) {
      if (row.size() != n_jumps_) throw InputError("model: layer '" + layer.constant + "' rows must have jumps entries");
    }
  }

  real_.assign(dim_, std::vector<double>(n_jumps_, 0.0));
  for (const auto& layer : layers_) {
    for (std::size_t i = 0; i < dim_; ++i) {
      const auto& row = layer.matrix[i];
      Integer scale = 1;
      for (const auto& q : row) mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), q.get_den_mpz_t());
      IntegerRow irow(n_jumps_);
      for (std::size_t j = 0; j < n_jumps_; ++j) {
        Rational scaled = row[j] * scale;
        irow[j] = scaled.get_num();
        real_[i][j] += layer.value * row[j].get_d();
      }
      stacked_.push_back(std::move(irow));
      row_scales_.push_back(scale);
    }
  }

  for (std::size_t j = 0; j < n_jumps_; ++j) {
    bool zero = true;
    for (const auto& row : stacked_) zero = zero && row[j] == 0;
    if (zero) throw InputError("model: jump " + std::to_string(j + 1) + " is zero");
    for (std::size_t k = 0; k < j; ++k) {
      bool same = true;
      for (std::size_t r = 0; r < stacked_.size() && same; ++r) {
        // Rows are scaled uniformly, so equal stacked columns means equal jumps.
        same = stacked_[r][j] == stacked_[r][k];
      }
      if (same) {
        throw InputError("model: jumps " + std::to_string(k + 1) + " and " + std::to_string(j + 1) + " coincide");
      }
    }
  }
  stacked_rank_ = rational_rank(stacked_);
}

JumpModel JumpModel::from_integer_columns(const std::vector<std::vector<std::int64_t>>& columns) {
  if (columns.empty()) throw InputError("model: no jumps");
  const std::size_t d = columns.front().size();
  Layer layer{"1", 1.0, RationalMatrix(d, std::vector<Rational>(columns.size()))};
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != d) throw InputError("model: ragged jump columns");
    for (std::size_t i = 0; i < d; ++i) layer.matrix[i][j] = Rational(static_cast<long>(columns[j][i]));
  }
  return JumpModel(d, columns.size(), {std::move(layer)});
}

std::vector<double> JumpModel::jump(std::size_t j) const {
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = real_[i].at(j);
  return out;
}

IntegerRow JumpModel::image(std::span<const std::int64_t> n) const {
  if (n.size() != n_jumps_) throw InputError("image: expected length " + std::to_string(n_jumps_));
  IntegerRow out(stacked_.size(), 0);
  for (std::size_t r = 0; r < stacked_.size(); ++r) {
    for (std::size_t j = 0; j < n_jumps_; ++j) {
      if (n[j] != 0) out[r] += stacked_[r][j] * static_cast<long>(n[j]);
    }
  }
  return out;
}

IntegerRow JumpModel::image(const LatticeVector& n) const {
  if (n.size() != n_jumps_) throw InputError("image: expected length " + std::to_string(n_jumps_));
  IntegerRow out(stacked_.size(), 0);
  for (std::size_t r = 0; r < stacked_.size(); ++r) {
    for (std::size_t j = 0; j < n_jumps_; ++j) out[r] += stacked_[r][j] * n[j];
  }
  return out;
}

std::vector<double> JumpModel::displace(std::span<const double> x0, std::span<const std::int64_t> n) const {
  std::vector<double> x(x0.begin(), x0.end());
  if (x.empty()) x.assign(dim_, 0.0);
  for (std::size_t i = 0; i < dim_; ++i) {
    for (std::size_t j = 0; j < n_jumps_; ++j) x[i] += real_[i][j] * static_cast<double>(n[j]);
  }
  return x;
}

LatticeBasis::LatticeBasis(std::size_t length, std::vector<LatticeVector> vectors)
    : length_(length), vectors_(std::move(vectors)) {
  for (const auto& v : vectors_) {
    if (v.size() != length_) throw InputError("basis vector " + format_vector(v) + " has the wrong length");
  }
  hnf_ = hermite_normal_form(vectors_);
  if (hnf_.size() != vectors_.size()) throw InputError("basis vectors are linearly dependent");
  pivots_ = echelon_pivots(hnf_);
}

std::optional<std::vector<Integer>> LatticeBasis::hnf_coordinates(const LatticeVector& v) const {
  if (v.size() != length_) throw InputError("lattice membership: length mismatch");
  return echelon_coordinates(hnf_, pivots_, v);
}

bool LatticeBasis::contains(const LatticeVector& v) const { return hnf_coordinates(v).has_value(); }

bool LatticeBasis::same_lattice(const LatticeBasis& other) const {
  return length_ == other.length_ && hnf_ == other.hnf_;
}

LatticeBasis kernel_basis(const JumpModel& model) {
  // U * M^T = E; the rows of U past the rank annihilate M^T.
  auto form = row_echelon(transpose(model.stacked()), false);
  IntegerMatrix kernel(form.transform.begin() + static_cast<std::ptrdiff_t>(form.rank), form.transform.end());
  return LatticeBasis(model.n_jumps(), hermite_normal_form(kernel));
}

bool in_kernel(const JumpModel& model, const LatticeVector& v) {
  if (v.size() != model.n_jumps()) {
    throw InputError("in_kernel: expected length " + std::to_string(model.n_jumps()) + ", got " +
                     std::to_string(v.size()));
  }
  for (const auto& x : model.image(v)) {
    if (x != 0) return false;
  }
  return true;
}

bool in_lattice(const LatticeBasis& basis, const LatticeVector& v) { return basis.contains(v); }

Rational shift_density_G(const LatticeVector& c, std::span<const std::int64_t> n) {
  if (c.size() != n.size()) throw InputError("shift_density_G: length mismatch");
  Integer num = 1, den = 1;
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j] > n[j]) return 0;
    if (c[j] >= 0) {
      // n! / (n-c)! = n (n-1) ... (n-c+1)
      for (Integer k = n[j] - c[j] + 1; k <= n[j]; ++k) num *= k;
    } else {
      for (Integer k = n[j] + 1; k <= n[j] - c[j]; ++k) den *= k;
    }
  }
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::vector<CountVector> fiber_points_at(const JumpModel& model, const LatticeVector& anchor, const CountVector& box) {
  if (anchor.size() != model.n_jumps() || box.size() != model.n_jumps()) {
    throw InputError("fiber enumeration: anchor and box must have length " + std::to_string(model.n_jumps()));
  }
  if (std::any_of(box.begin(), box.end(), [](std::int64_t b) { return b < 0; })) {
    throw InputError("fiber enumeration: negative box bound");
  }
  const auto basis = kernel_basis(model);
  std::vector<CountVector> out;
  if (basis.rank() == 0) {
    for (std::size_t j = 0; j < anchor.size(); ++j) {
      if (anchor[j] < 0 || anchor[j] > box[j]) return out;
    }
    out.push_back(to_counts(anchor));
    return out;
  }

  double volume = 1.0;
  for (auto b : box) volume *= static_cast<double>(b) + 1.0;
  bool small_entries = true;
  for (const auto& row : model.stacked()) {
    for (const auto& x : row) small_entries = small_entries && abs(x) < (Integer(1) << 40);
  }
  for (auto b : box) small_entries = small_entries && b < (std::int64_t{1} << 40);

  if (volume <= kFiberScanLimit && small_entries) return scan_box(model, anchor, box);
  EchelonWalk walk{basis.hnf(), echelon_pivots(basis.hnf()), box, out};
  IntegerRow cur = anchor;
  walk.run(cur, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CountVector> fiber_points(const JumpModel& model, const CountVector& n0, const CountVector& box) {
  check_box(n0, box, model.n_jumps());
  return fiber_points_at(model, to_lattice(n0), box);
}

std::optional<CountVector> default_box(const JumpModel& model, const CountVector& n0) {
  if (n0.size() != model.n_jumps()) throw InputError("default_box: length mismatch");
  for (const auto& row : model.stacked()) {
    int sign = 0;
    bool strict = true;
    for (const auto& x : row) {
      int s = sgn(x);
      if (s == 0 || (sign != 0 && s != sign)) {
        strict = false;
        break;
      }
      sign = s;
    }
    if (!strict) continue;
    Integer total = 0;
    for (std::size_t j = 0; j < row.size(); ++j) total += abs(row[j]) * static_cast<long>(n0[j]);
    CountVector box(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) {
      Integer bound = total / abs(row[j]);
      if (!fits_int64(bound)) return std::nullopt;
      box[j] = bound.get_si();
    }
    return box;
  }
  return std::nullopt;
}

}  // namespace recip
