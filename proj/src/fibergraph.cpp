// SPDX-License-Identifier: Apache-2.0
#include "recip/fibergraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "recip/error.hpp"

namespace recip {
namespace {

std::string show(const LatticeVector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].get_str();
  return s + ")";
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

void require_in_kernel(const JumpModel& model, const std::vector<LatticeVector>& gamma) {
  for (const auto& c : gamma) {
    if (c.size() != model.n_jumps()) throw InputError("generator " + show(c) + " has the wrong length");
    if (!in_kernel(model, c)) throw InputError("generator " + show(c) + " is not in ker_Z(A)");
  }
}

FiberGraph build_fiber_graph(const JumpModel& model, const CountVector& n0, const std::vector<LatticeVector>& gamma,
                             const CountVector& box) {
  require_in_kernel(model, gamma);
  FiberGraph g;
  g.vertices = fiber_points(model, n0, box);

  std::map<CountVector, std::size_t> index;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) index.emplace(g.vertices[i], i);

  std::map<std::pair<std::size_t, std::size_t>, LatticeVector> edges;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    const auto& v = g.vertices[i];
    for (const auto& c : gamma) {
      CountVector w(v.size());
      bool ok = true;
      for (std::size_t j = 0; j < v.size() && ok; ++j) {
        Integer x = c[j] + static_cast<long>(v[j]);
        ok = x >= 0 && x.fits_slong_p();
        if (ok) w[j] = x.get_si();
      }
      if (!ok) continue;
      auto it = index.find(w);
      if (it == index.end() || it->second == i) continue;
      auto key = std::minmax(i, it->second);
      auto [slot, inserted] = edges.emplace(key, c);
      if (!inserted && c < slot->second) slot->second = c;
    }
  }
  for (auto& [key, c] : edges) {
    g.edges.push_back(key);
    g.generator_of_edge.push_back(std::move(c));
  }
  return g;
}

std::vector<std::vector<std::size_t>> connected_components(const FiberGraph& graph) {
  DisjointSets sets(graph.vertices.size());
  for (auto [a, b] : graph.edges) sets.unite(a, b);
  std::map<std::size_t, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) groups[sets.find(i)].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [root, members] : groups) out.push_back(std::move(members));
  std::sort(out.begin(), out.end());
  return out;
}

bool isolated_certificate(const CountVector& n0, const std::vector<LatticeVector>& gamma) {
  for (const auto& c : gamma) {
    if (c.size() != n0.size()) throw InputError("isolated_certificate: length mismatch");
    bool plus_leaves = false, minus_leaves = false;
    for (std::size_t j = 0; j < c.size(); ++j) {
      plus_leaves = plus_leaves || c[j] + static_cast<long>(n0[j]) < 0;
      minus_leaves = minus_leaves || static_cast<long>(n0[j]) - c[j] < 0;
    }
    if (!plus_leaves || !minus_leaves) return false;
  }
  return true;
}

PosrayResult posray_check(const std::vector<LatticeVector>& basis) {
  PosrayResult r;
  r.cond_ii = true;
  for (const auto& v : basis) {
    bool positive = !v.empty() && std::all_of(v.begin(), v.end(), [](const Integer& x) { return x > 0; });
    bool nonneg = std::all_of(v.begin(), v.end(), [](const Integer& x) { return x >= 0; });
    r.cond_i = r.cond_i || positive;
    r.cond_ii = r.cond_ii && nonneg;
  }
  return r;
}

std::vector<LatticeVector> connect_certificate(const JumpModel& model, const std::vector<LatticeVector>& basis,
                                               const CountVector& n, const CountVector& m) {
  const std::size_t a = model.n_jumps();
  if (n.size() != a || m.size() != a) throw InputError("connect_certificate: endpoints must have length " + std::to_string(a));
  LatticeVector diff(a);
  for (std::size_t j = 0; j < a; ++j) diff[j] = Integer(static_cast<long>(m[j])) - static_cast<long>(n[j]);
  if (!in_kernel(model, diff)) throw InputError("connect_certificate: m - n = " + show(diff) + " is not in ker_Z(A)");
  if (n == m) return {};

  auto positive = std::find_if(basis.begin(), basis.end(), [](const LatticeVector& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](const Integer& x) { return x > 0; });
  });
  if (positive == basis.end()) throw InputError("connect_certificate: basis has no strictly positive vector");
  const LatticeVector& cbar = *positive;

  auto z = rational_coordinates(basis, diff);
  if (!z) throw InputError("connect_certificate: m - n is outside the span of the basis");
  std::vector<LatticeVector> walk;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if ((*z)[i].get_den() != 1) throw InputError("connect_certificate: m - n is not an integer combination of the basis");
    Integer k = (*z)[i].get_num();
    LatticeVector step = basis[i];
    if (k < 0) {
      for (auto& x : step) x = -x;
      k = -k;
    }
    for (Integer t = 0; t < k; ++t) walk.push_back(step);
  }

  // Lowest coordinate reached by the raw walk.
  Integer lowest = 0;
  LatticeVector cur = to_lattice(n);
  for (const auto& step : walk) {
    for (std::size_t j = 0; j < a; ++j) {
      cur[j] += step[j];
      if (cur[j] < lowest) lowest = cur[j];
    }
  }
  Integer cmin = *std::min_element(cbar.begin(), cbar.end());
  Integer l;
  Integer need = -lowest;
  mpz_cdiv_q(l.get_mpz_t(), need.get_mpz_t(), cmin.get_mpz_t());

  LatticeVector down = cbar;
  for (auto& x : down) x = -x;
  std::vector<LatticeVector> moves;
  for (Integer t = 0; t < l; ++t) moves.push_back(cbar);
  moves.insert(moves.end(), walk.begin(), walk.end());
  for (Integer t = 0; t < l; ++t) moves.push_back(down);
  return moves;
}

GensetReport genset_box_report(const JumpModel& model, const std::vector<LatticeVector>& gamma,
                               const std::vector<CountVector>& seeds, const std::optional<CountVector>& box) {
  require_in_kernel(model, gamma);
  GensetReport report;
  bool any_certified = false, all_connected = true;
  for (const auto& seed : seeds) {
    GensetSeedReport s;
    s.seed = seed;
    auto natural = default_box(model, seed);
    if (box) {
      s.box = *box;
    } else if (natural) {
      s.box = *natural;
    } else {
      throw InputError("fibers of this model are not bounded; supply a box");
    }
    if (natural) {
      s.fiber_complete_in_box = true;
      for (std::size_t j = 0; j < seed.size(); ++j) {
        s.fiber_complete_in_box = s.fiber_complete_in_box && s.box[j] >= (*natural)[j];
      }
    }
    auto graph = build_fiber_graph(model, seed, gamma, s.box);
    s.fiber_size = graph.vertices.size();
    s.components = connected_components(graph).size();
    for (const auto& v : graph.vertices) {
      if (isolated_certificate(v, gamma)) s.isolated_certificates.push_back(v);
    }
    if (!s.isolated_certificates.empty() && s.fiber_size >= 2) {
      s.verdict = verdict::kCertified;
      any_certified = true;
    } else if (s.components == 1) {
      s.verdict = verdict::kConnected;
    } else {
      s.verdict = verdict::kInconclusive;
    }
    all_connected = all_connected && s.components == 1;
    report.seeds.push_back(std::move(s));
  }
  report.verdict = any_certified ? verdict::kCertified : all_connected ? verdict::kConnected : verdict::kInconclusive;
  return report;
}

}  // namespace recip
