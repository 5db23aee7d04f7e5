// SPDX-License-Identifier: Apache-2.0
#include "recip/io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "recip/error.hpp"

namespace recip::io {
namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing field '" + key + "'");
  return j.at(key);
}

Integer integer_from(const Json& j) {
  if (j.is_number_integer()) return Integer(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) {
    Rational q = parse_rational(j.get<std::string>());
    if (q.get_den() != 1) fail("expected an integer, got " + j.get<std::string>());
    return q.get_num();
  }
  fail("expected an integer, got " + j.dump());
}

Rational rational_from(const Json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail("expected a rational string like \"p/q\", got " + j.dump());
}

double real_from(const Json& j) {
  if (!j.is_number()) fail("expected a number, got " + j.dump());
  return j.get<double>();
}

std::vector<double> reals_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(real_from(x));
  return out;
}

// JSON has no infinity; report it as a string.
Json real_to_json(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // e.byte is one past the offending character.
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    fail(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" + msg + ")");
  }
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

JumpModel model_from_json(const Json& j) {
  const std::string where = "model";
  const auto dim = field(j, "dim", where).get<std::int64_t>();
  const auto jumps = field(j, "jumps", where).get<std::int64_t>();
  if (dim <= 0 || jumps <= 0) fail("model: dim and jumps must be positive");
  std::vector<Layer> layers;
  const auto& lj = field(j, "layers", where);
  if (!lj.is_array() || lj.empty()) fail("model: 'layers' must be a nonempty array");
  for (const auto& l : lj) {
    Layer layer;
    layer.constant = field(l, "constant", "model layer").get<std::string>();
    if (l.contains("value")) {
      layer.value = real_from(l.at("value"));
    } else if (auto v = known_constant(layer.constant)) {
      layer.value = *v;
    } else {
      fail("model: layer constant '" + layer.constant + "' is not built in; give its numeric 'value'");
    }
    const auto& m = field(l, "matrix", "model layer");
    if (!m.is_array()) fail("model: layer matrix must be an array of rows");
    for (const auto& row : m) {
      if (!row.is_array()) fail("model: layer matrix must be an array of rows");
      std::vector<Rational> r;
      for (const auto& x : row) r.push_back(rational_from(x));
      layer.matrix.push_back(std::move(r));
    }
    layers.push_back(std::move(layer));
  }
  return JumpModel(static_cast<std::size_t>(dim), static_cast<std::size_t>(jumps), std::move(layers));
}

Json model_to_json(const JumpModel& model) {
  Json layers = Json::array();
  for (const auto& l : model.layers()) {
    Json m = Json::array();
    for (const auto& row : l.matrix) {
      Json r = Json::array();
      for (const auto& q : row) r.push_back(q.get_str());
      m.push_back(std::move(r));
    }
    Json lj = {{"constant", l.constant}};
    if (!known_constant(l.constant)) lj["value"] = l.value;
    lj["matrix"] = std::move(m);
    layers.push_back(std::move(lj));
  }
  return {{"dim", model.dim()}, {"jumps", model.n_jumps()}, {"layers", std::move(layers)}};
}

RateFunction rates_from_json(const Json& j, std::size_t n_jumps) {
  if (j.is_object() && j.contains("nu")) {
    auto nu = reals_from(j.at("nu"), "rates.nu");
    if (nu.size() != n_jumps) fail("rates: 'nu' needs " + std::to_string(n_jumps) + " entries");
    return RateFunction::homogeneous(nu);
  }
  const Json& list = j.is_object() && j.contains("rates") ? j.at("rates") : j;
  if (!list.is_array()) fail("rates: expected an array of per-type entries or {\"nu\": [...]}");
  std::vector<std::optional<PiecewiseLinear>> per(n_jumps);
  for (const auto& e : list) {
    const auto type = field(e, "type", "rates entry").get<std::int64_t>();
    if (type < 1 || static_cast<std::size_t>(type) > n_jumps) {
      fail("rates: type " + std::to_string(type) + " outside 1.." + std::to_string(n_jumps));
    }
    auto& slot = per[static_cast<std::size_t>(type - 1)];
    if (slot) fail("rates: type " + std::to_string(type) + " given twice");
    slot.emplace(reals_from(field(e, "breakpoints", "rates entry"), "breakpoints"),
                 reals_from(field(e, "values", "rates entry"), "values"));
  }
  std::vector<PiecewiseLinear> out;
  for (std::size_t k = 0; k < n_jumps; ++k) {
    if (!per[k]) fail("rates: no entry for type " + std::to_string(k + 1));
    out.push_back(*per[k]);
  }
  return RateFunction(std::move(out));
}

Json rates_to_json(const RateFunction& rates) {
  Json out = Json::array();
  for (std::size_t j = 0; j < rates.size(); ++j) {
    out.push_back({{"type", j + 1}, {"breakpoints", rates[j].breakpoints()}, {"values", rates[j].values()}});
  }
  return out;
}

TimeChange timechange_from_json(const Json& j, std::size_t n_jumps) {
  const auto family = field(j, "family", "timechange").get<std::string>();
  if (family == "identity") return TimeChange::identity(n_jumps);
  if (family != "exp_warp") fail("timechange: unknown family '" + family + "'");
  auto a = reals_from(field(j, "a", "timechange"), "timechange.a");
  if (a.size() != n_jumps) fail("timechange: 'a' needs " + std::to_string(n_jumps) + " entries");
  return TimeChange::exp_warp(a);
}

EndpointMixture mixture_from_json(const Json& j) {
  const Json& list = j.is_object() && j.contains("mixture") ? j.at("mixture") : j;
  if (!list.is_array()) fail("mixture: expected an array of {x, y, w}");
  EndpointMixture mix;
  for (const auto& e : list) {
    EndpointPair p;
    p.x = reals_from(field(e, "x", "mixture entry"), "x");
    p.y = reals_from(field(e, "y", "mixture entry"), "y");
    p.w = e.contains("w") ? real_from(e.at("w")) : 1.0;
    mix.entries.push_back(std::move(p));
  }
  return mix;
}

LatticeVector lattice_from_json(const Json& j) {
  if (!j.is_array()) fail("expected an integer vector, got " + j.dump());
  LatticeVector v;
  for (const auto& x : j) v.push_back(integer_from(x));
  return v;
}

std::vector<LatticeVector> vectors_from_json(const Json& j) {
  if (!j.is_array()) fail("expected a list of integer vectors");
  std::vector<LatticeVector> out;
  for (const auto& v : j) out.push_back(lattice_from_json(v));
  return out;
}

CountVector counts_from_json(const Json& j) { return to_counts(lattice_from_json(j)); }

Json to_json(const LatticeVector& v) {
  Json out = Json::array();
  for (const auto& x : v) {
    if (x.fits_slong_p()) {
      out.push_back(x.get_si());
    } else {
      out.push_back(x.get_str());
    }
  }
  return out;
}

Json to_json(const std::vector<LatticeVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(to_json(v));
  return out;
}

Json to_json(const SparseDistribution& d) {
  Json support = Json::array();
  for (const auto& [n, w] : d.weights) support.push_back({{"n", n}, {"w", w}});
  Json out = {{"tail_bound", d.tail_bound}};
  if (d.box) out["box"] = *d.box;
  out["support"] = std::move(support);
  return out;
}

SparseDistribution distribution_from_json(const Json& j) {
  SparseDistribution d;
  const Json* list = &j;
  if (j.is_object()) {
    list = &field(j, "support", "distribution");
    if (j.contains("tail_bound")) d.tail_bound = real_from(j.at("tail_bound"));
    if (j.contains("box")) d.box = counts_from_json(j.at("box"));
  }
  if (!list->is_array()) fail("distribution: expected a list of {n, w}");
  for (const auto& e : *list) {
    auto n = counts_from_json(field(e, "n", "distribution entry"));
    d.weights[n] += real_from(field(e, "w", "distribution entry"));
  }
  d.validate();
  return d;
}

Json path_to_json(const Path& p) {
  Json events = Json::array();
  for (const auto& e : p.events) events.push_back({{"t", e.t}, {"j", e.j + 1}});
  return {{"x0", p.x0}, {"events", std::move(events)}};
}

Path path_from_json(const Json& j) {
  Path p;
  if (j.contains("x0")) p.x0 = reals_from(j.at("x0"), "x0");
  for (const auto& e : field(j, "events", "path")) {
    const auto type = field(e, "j", "event").get<std::int64_t>();
    if (type < 1) fail("path: jump types are 1-based");
    p.events.push_back({real_from(field(e, "t", "event")), static_cast<std::size_t>(type - 1)});
  }
  for (std::size_t k = 1; k < p.events.size(); ++k) {
    if (p.events[k].t < p.events[k - 1].t) fail("path: events must be sorted by time");
  }
  return p;
}

Json to_json(const GensetReport& r) {
  Json seeds = Json::array();
  for (const auto& s : r.seeds) {
    seeds.push_back({{"seed", s.seed},
                     {"box", s.box},
                     {"fiber_complete_in_box", s.fiber_complete_in_box},
                     {"fiber_size", s.fiber_size},
                     {"components", s.components},
                     {"isolated_certificates", s.isolated_certificates},
                     {"verdict", s.verdict}});
  }
  return {{"verdict", r.verdict}, {"seeds", std::move(seeds)}};
}

Json to_json(const ShiftReport& r) {
  Json out = {{"c", to_json(r.c)}, {"points", r.points}, {"max_residual", real_to_json(r.max_residual)}};
  out["worst_n"] = r.worst ? Json(*r.worst) : Json();
  return out;
}

Json to_json(const MembershipReport& r) {
  Json out = {{"member", r.member}, {"fibers", r.fibers}, {"max_spread", real_to_json(r.max_spread)}};
  out["worst_fiber_point"] = r.worst_fiber_point ? Json(*r.worst_fiber_point) : Json();
  out["ac_violations"] = r.ac_violations;
  return out;
}

Json to_json(const CounterexampleReport& r) {
  Json shifts = Json::array();
  for (const auto& s : r.shifts) shifts.push_back(to_json(s));
  return {{"basis", to_json(r.basis)},
          {"v", to_json(r.v)},
          {"n_v", r.n_v},
          {"feasible_moves", to_json(r.feasible_moves)},
          {"unique_move", r.unique_move},
          {"p_lambda_n_v", r.p_nv},
          {"shifts", std::move(shifts)},
          {"shifts_pass", r.shifts_pass},
          {"membership", to_json(r.membership)}};
}

Json to_json(const SameClassReport& r) {
  Json diffs = Json::array();
  for (double d : r.log_phi_diff) diffs.push_back(real_to_json(d));
  return {{"verdict", r.same ? "SAME" : "DIFFERENT"},
          {"basis", to_json(r.basis)},
          {"log_phi_diff", std::move(diffs)},
          {"phi_equal", r.phi_equal},
          {"projection_residual", real_to_json(r.projection_residual)},
          {"homogeneous", r.homogeneous},
          {"xi_max_diff", real_to_json(r.xi_max_diff)},
          {"xi_equal", r.xi_equal}};
}

Json to_json(const McCompare& r) {
  return {{"name", r.name}, {"n1", r.n1}, {"n2", r.n2}, {"m1", real_to_json(r.m1)}, {"m2", real_to_json(r.m2)},
          {"se1", real_to_json(r.se1)}, {"se2", real_to_json(r.se2)}, {"z", real_to_json(r.z)}, {"pass", r.pass}};
}

Json to_json(const TimeChangeReport& r) {
  Json tests = Json::array();
  for (const auto& t : r.tests) tests.push_back(to_json(t));
  return {{"reading", to_string(r.reading)}, {"pass", r.pass}, {"collisions", r.collisions}, {"tests", std::move(tests)}};
}

Json to_json(const ShiftN1Report& r) {
  auto pair_json = [](const ShiftPair& p) {
    return Json{{"c", to_json(p.c)},          {"m", p.m},
                {"count_m", p.count_m},       {"count_shifted", p.count_shifted},
                {"lhs", real_to_json(p.lhs)}, {"rhs", real_to_json(p.rhs)},
                {"z", real_to_json(p.z)}};
  };
  Json out = {{"pass", r.pass}, {"pairs_tested", r.pairs.size()}, {"worst_z", real_to_json(r.worst_z)}};
  out["worst"] = r.worst ? pair_json(*r.worst) : Json();
  out["note"] = "the shift identity alone does not certify class membership; combine with the time-change check";
  return out;
}

Json to_json(const CtdnsReport& r) {
  Json out = {{"variant", to_string(r.variant)}, {"t", r.t},
              {"c", to_json(r.c)},               {"factor_defined", r.factor_defined},
              {"log_k", real_to_json(r.log_k)},  {"max_residual", real_to_json(r.max_residual)}};
  out["worst_n"] = r.worst ? Json(*r.worst) : Json();
  out["pass"] = r.pass;
  return out;
}

Json to_json(const ChenReport& r) {
  Json shifts = Json::array();
  for (const auto& s : r.shifts) shifts.push_back(to_json(s));
  return {{"pass", r.pass}, {"max_residual", real_to_json(r.max_residual)}, {"shifts", std::move(shifts)}};
}

std::vector<double> parse_real_list(const std::string& s) {
  std::string t;
  for (char ch : s) {
    if (ch != '[' && ch != ']' && ch != '(' && ch != ')' && ch != ' ') t += ch;
  }
  std::vector<double> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) fail("empty entry in list '" + s + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      fail("not a number: '" + item + "'");
    }
    if (used != item.size()) fail("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

CountVector parse_count_list(const std::string& s) {
  CountVector out;
  for (double v : parse_real_list(s)) {
    if (v != std::floor(v) || std::fabs(v) > 9e15) fail("expected integers in '" + s + "'");
    out.push_back(static_cast<std::int64_t>(v));
  }
  return out;
}

std::vector<LatticeVector> parse_vector_list(const std::string& s) {
  const auto first = s.find_first_not_of(' ');
  if (first != std::string::npos && s[first] == '[') return vectors_from_json(parse_json(s, "vector list"));
  std::vector<LatticeVector> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(' ') == std::string::npos) continue;
    std::string t;
    int depth = 0;
    for (char ch : item) {
      if (ch == '(') ++depth;
      if (ch == ')') --depth;
      if (depth < 0 || depth > 1) throw InputError("unbalanced parentheses in vector list: " + s);
      if (ch != '(' && ch != ')' && ch != ' ') t += ch;
    }
    if (depth != 0) throw InputError("unbalanced parentheses in vector list: " + s);
    LatticeVector v;
    std::stringstream is(t);
    std::string x;
    while (std::getline(is, x, ',')) v.push_back(integer_from(Json(x)));
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace recip::io
