// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "recip/bridge.hpp"
#include "recip/fibergraph.hpp"
#include "recip/harness.hpp"
#include "recip/latcore.hpp"
#include "recip/poisson.hpp"
#include "recip/process.hpp"

namespace recip::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "1";

/// Parse errors become InputError("<origin>:<line>:<column>: ...").
Json parse_json(const std::string& text, const std::string& origin);
Json load_json_file(const std::string& path);
std::string dump(const Json& j);

JumpModel model_from_json(const Json& j);
Json model_to_json(const JumpModel& model);

/// Either [{"type": j, "breakpoints": [...], "values": [...]}, ...] (1-based
/// types, any order) or {"nu": [...]} for constant rates.
RateFunction rates_from_json(const Json& j, std::size_t n_jumps);
Json rates_to_json(const RateFunction& rates);

/// {"family": "exp_warp", "a": [...]}.
TimeChange timechange_from_json(const Json& j, std::size_t n_jumps);

/// [{"x": [...], "y": [...], "w": 0.5}, ...].
EndpointMixture mixture_from_json(const Json& j);

LatticeVector lattice_from_json(const Json& j);
std::vector<LatticeVector> vectors_from_json(const Json& j);
CountVector counts_from_json(const Json& j);
Json to_json(const LatticeVector& v);
Json to_json(const std::vector<LatticeVector>& vs);

Json to_json(const SparseDistribution& d);
SparseDistribution distribution_from_json(const Json& j);

/// JSONL record with 1-based jump types.
Json path_to_json(const Path& p);
Path path_from_json(const Json& j);

Json to_json(const GensetReport& r);
Json to_json(const ShiftReport& r);
Json to_json(const MembershipReport& r);
Json to_json(const CounterexampleReport& r);
Json to_json(const SameClassReport& r);
Json to_json(const McCompare& r);
Json to_json(const TimeChangeReport& r);
Json to_json(const ShiftN1Report& r);
Json to_json(const CtdnsReport& r);
Json to_json(const ChenReport& r);

/// Parses "1,2,3" or "[1,2,3]".
std::vector<double> parse_real_list(const std::string& s);
CountVector parse_count_list(const std::string& s);
/// Parses "(2,-4,2);(0,-5,4)" or a JSON list of integer vectors.
std::vector<LatticeVector> parse_vector_list(const std::string& s);

}  // namespace recip::io
