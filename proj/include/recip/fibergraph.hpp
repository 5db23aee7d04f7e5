// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "recip/latcore.hpp"

namespace recip {

struct FiberGraph {
  std::vector<CountVector> vertices;                      // sorted
  std::vector<std::pair<std::size_t, std::size_t>> edges; // (i, j) with i < j
  std::vector<LatticeVector> generator_of_edge;           // vertices[j] - vertices[i] == +-generator
};

/// Throws InputError naming the first vector of `gamma` outside ker_Z(A).
void require_in_kernel(const JumpModel& model, const std::vector<LatticeVector>& gamma);

FiberGraph build_fiber_graph(const JumpModel& model, const CountVector& n0, const std::vector<LatticeVector>& gamma,
                             const CountVector& box);

/// Components as sorted lists of vertex indices, ordered by smallest member.
std::vector<std::vector<std::size_t>> connected_components(const FiberGraph& graph);

/// True iff n0 + c leaves N^A for every c in +-gamma.
bool isolated_certificate(const CountVector& n0, const std::vector<LatticeVector>& gamma);

struct PosrayResult {
  bool cond_i = false;   // some vector is strictly positive
  bool cond_ii = false;  // every vector is nonnegative
};

PosrayResult posray_check(const std::vector<LatticeVector>& basis);

/// Moves from +-basis walking n to m inside N^A. Requires a strictly positive
/// basis vector and m - n in the lattice spanned by `basis`.
std::vector<LatticeVector> connect_certificate(const JumpModel& model, const std::vector<LatticeVector>& basis,
                                               const CountVector& n, const CountVector& m);

namespace verdict {
inline constexpr const char* kConnected = "connected-in-box";
inline constexpr const char* kCertified = "disconnected-certified";
inline constexpr const char* kInconclusive = "disconnected-in-box-inconclusive";
}  // namespace verdict

struct GensetSeedReport {
  CountVector seed;
  CountVector box;
  bool fiber_complete_in_box = false;
  std::size_t fiber_size = 0;
  std::size_t components = 0;
  std::vector<CountVector> isolated_certificates;
  std::string verdict;
};

struct GensetReport {
  std::vector<GensetSeedReport> seeds;
  std::string verdict;
};

/// With no box, each seed uses default_box(); InputError if none exists.
GensetReport genset_box_report(const JumpModel& model, const std::vector<LatticeVector>& gamma,
                               const std::vector<CountVector>& seeds, const std::optional<CountVector>& box);

}  // namespace recip
