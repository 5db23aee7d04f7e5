// SPDX-License-Identifier: Apache-2.0
#include "recip/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "recip/bridge.hpp"
#include "recip/error.hpp"
#include "recip/fibergraph.hpp"
#include "recip/harness.hpp"
#include "recip/io.hpp"
#include "recip/parallel.hpp"

namespace recip::cli {
namespace {

using io::Json;

struct Opts {
  std::string model, rates, rates2, mixture, gamma, box, eps, out, config, timechange, warp;
  std::string x, y, x0, nstar, cycle, c, lambda, points, compare, source, preset;
  std::optional<std::string> reading, variant;
  std::optional<double> t, z_crit, delta;
  std::optional<std::int64_t> n;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool general = false;
  bool dist = false;
};

// Which flags a subcommand accepts.
enum Flag : unsigned {
  kModel = 1u << 0,
  kRates = 1u << 1,
  kRates2 = 1u << 2,
  kMixture = 1u << 3,
  kGamma = 1u << 4,
  kBox = 1u << 5,
  kEps = 1u << 6,
  kT = 1u << 7,
  kN = 1u << 8,
  kSeed = 1u << 9,
  kZCrit = 1u << 10,
  kThreads = 1u << 11,
  kReading = 1u << 12,
  kVariant = 1u << 13,
  kConfig = 1u << 14,
  kEndpoints = 1u << 15,
  kDelta = 1u << 16,
};

void add_flags(CLI::App* app, Opts& o, unsigned flags) {
  app->add_option("--out", o.out, "Write output to this file instead of stdout");
  if (flags & kModel) app->add_option("--model", o.model, "Jump model JSON file");
  if (flags & kRates) app->add_option("--rates", o.rates, "Rate function JSON file");
  if (flags & kRates2) app->add_option("--rates2", o.rates2, "Second rate function JSON file");
  if (flags & kMixture) app->add_option("--mixture", o.mixture, "Endpoint mixture JSON file");
  if (flags & kGamma) app->add_option("--gamma", o.gamma, "Kernel vectors, e.g. \"(2,-4,2);(0,-5,4)\" or a JSON list");
  if (flags & kBox) app->add_option("--box", o.box, "Componentwise upper bounds, e.g. 11,8,7");
  if (flags & kEps) app->add_option("--eps", o.eps, "Epsilon value or comma-separated list");
  if (flags & kT) app->add_option("--t", o.t, "Time in [0,1]");
  if (flags & kN) app->add_option("--n", o.n, "Number of replicates or paths");
  if (flags & kSeed) app->add_option("--seed", o.seed, "Master seed");
  if (flags & kZCrit) app->add_option("--z-crit", o.z_crit, "Critical |z| for Monte Carlo comparisons (default 4)");
  if (flags & kThreads) app->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
  if (flags & kReading)
    app->add_option("--reading", o.reading, "Density reading")->check(CLI::IsMember({"girsanov", "literal"}));
  if (flags & kVariant)
    app->add_option("--variant", o.variant, "Time-t factor variant")->check(CLI::IsMember({"paper", "derived"}));
  if (flags & kConfig) app->add_option("--config", o.config, "JSON config with sections model, rates, timechange, gamma, test, n, seed, z_crit");
  if (flags & kEndpoints) {
    app->add_option("--x", o.x, "Initial point, comma-separated");
    app->add_option("--y", o.y, "Final point, comma-separated");
  }
  if (flags & kDelta) app->add_option("--delta", o.delta, "Poisson truncation tolerance (default 1e-12)");
}

// Resolves inputs from flags first, then from the --config document.
class Inputs {
 public:
  Inputs(const Opts& o) : o_(o) {
    if (!o.config.empty()) {
      config_ = io::load_json_file(o.config);
      if (!config_.is_object()) throw InputError(o.config + ": config must be a JSON object");
      base_ = std::filesystem::path(o.config).parent_path();
    }
  }

  const Json& config() const { return config_; }

  bool has(const char* section) const { return config_.is_object() && config_.contains(section); }

  Json section(const std::string& flag_path, const char* key) const {
    if (!flag_path.empty()) return io::load_json_file(flag_path);
    if (!has(key)) throw InputError(std::string("missing --") + key + " (or a '" + key + "' section in --config)");
    const Json& v = config_.at(key);
    if (v.is_string()) return io::load_json_file((base_ / v.get<std::string>()).string());
    return v;
  }

  const Json* test(const char* key) const {
    if (has("test") && config_.at("test").is_object() && config_.at("test").contains(key)) {
      return &config_.at("test").at(key);
    }
    return nullptr;
  }

  JumpModel model() const { return io::model_from_json(section(o_.model, "model")); }
  RateFunction rates(const JumpModel& m) const { return io::rates_from_json(section(o_.rates, "rates"), m.n_jumps()); }

  std::int64_t n(std::int64_t fallback) const {
    if (o_.n) return *o_.n;
    if (has("n")) return config_.at("n").get<std::int64_t>();
    return fallback;
  }
  std::uint64_t seed() const {
    if (o_.seed) return *o_.seed;
    if (has("seed")) return config_.at("seed").get<std::uint64_t>();
    return 1;
  }
  double z_crit() const {
    if (o_.z_crit) return *o_.z_crit;
    if (has("z_crit")) return config_.at("z_crit").get<double>();
    return kDefaultZCrit;
  }

 private:
  const Opts& o_;
  Json config_;
  std::filesystem::path base_;
};

void emit(const std::string& text, const Opts& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text;
}

Json report(const std::string& command, Json config, Json result) {
  return {{"schema", io::kSchema}, {"command", command}, {"config", std::move(config)}, {"result", std::move(result)}};
}

// Streams (JSONL, CSV) carry only data; their resolved config goes next to them.
void emit_stream_meta(const std::string& command, Json config, const Opts& o, std::ostream& err) {
  const std::string text = io::dump(report(command, std::move(config), Json()));
  if (o.out.empty()) {
    err << text;
    return;
  }
  std::ofstream f(o.out + ".meta.json", std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out + ".meta.json'");
  f << text;
}

std::vector<double> endpoint(const std::string& s, const JumpModel& model, const char* name) {
  if (s.empty()) return std::vector<double>(model.dim(), 0.0);
  auto v = io::parse_real_list(s);
  if (v.size() != model.dim()) throw InputError(std::string(name) + " must have " + std::to_string(model.dim()) + " coordinates");
  return v;
}

std::vector<std::vector<double>> parse_positions(const std::string& s, const JumpModel& model) {
  std::vector<std::vector<double>> out;
  if (s.find(';') != std::string::npos || model.dim() > 1) {
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) out.push_back(io::parse_real_list(item));
  } else {
    for (double v : io::parse_real_list(s)) out.push_back({v});
  }
  return out;
}

unsigned threads_of(const Opts& o) { return o.threads ? *o.threads : default_threads(); }

int cmd_kernel(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto basis = kernel_basis(model);
  Json result = {{"rank", basis.rank()},
                 {"stacked_rank", model.stacked_rank()},
                 {"basis", io::to_json(basis.vectors())}};
  int code = kOk;
  if (!o.compare.empty()) {
    const auto other = io::parse_vector_list(o.compare);
    for (const auto& v : other) {
      if (v.size() != model.n_jumps()) throw InputError("--compare vectors must have length " + std::to_string(model.n_jumps()));
    }
    bool equal = false;
    bool independent = true;
    try {
      equal = basis.same_lattice(LatticeBasis(model.n_jumps(), other));
    } catch (const InputError&) {
      independent = false;
      // Dependent generators: compare lattices through mutual membership.
      const auto hnf = hermite_normal_form(other);
      LatticeBasis gen(model.n_jumps(), hnf);
      equal = gen.same_lattice(basis);
    }
    result["compare"] = {{"vectors", io::to_json(other)}, {"independent", independent}, {"equal_lattice", equal}};
    if (!equal) code = kVerificationFailed;
  }
  emit(io::dump(report("kernel", {{"model", io::model_to_json(model)}}, std::move(result))), o, out);
  return code;
}

int cmd_genset(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  if (o.gamma.empty()) throw InputError("genset-check needs --gamma");
  const auto gamma = io::parse_vector_list(o.gamma);
  std::vector<CountVector> seeds;
  if (o.points.empty()) throw InputError("genset-check needs --points (seed count vectors)");
  for (const auto& v : io::parse_vector_list(o.points)) seeds.push_back(to_counts(v));
  std::optional<CountVector> box;
  if (!o.box.empty()) box = io::parse_count_list(o.box);

  const auto r = genset_box_report(model, gamma, seeds, box);
  const auto pos = posray_check(gamma);
  Json result = io::to_json(r);
  result["posray"] = {{"cond_i", pos.cond_i}, {"cond_ii", pos.cond_ii}};
  Json config = {{"model", io::model_to_json(model)}, {"gamma", io::to_json(gamma)}, {"points", seeds}};
  config["box"] = box ? Json(*box) : Json();
  emit(io::dump(report("genset-check", std::move(config), std::move(result))), o, out);
  return r.verdict == verdict::kConnected ? kOk : kVerificationFailed;
}

int cmd_simulate(const Opts& o, std::ostream& out, std::ostream& err) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  const auto x0 = endpoint(o.x0, model, "--x0");
  const auto n = in.n(1);
  if (n < 0) throw InputError("--n must be nonnegative");
  const auto seed = in.seed();
  std::vector<Path> paths(static_cast<std::size_t>(n));
  parallel_for(paths.size(), threads_of(o), [&](std::size_t i) {
    Rng rng(derive_seed(seed, 0, i));
    paths[i] = sample_cpp(x0, rates, rng);
  });
  std::string text;
  for (const auto& p : paths) text += io::path_to_json(p).dump() + "\n";
  emit(text, o, out);
  emit_stream_meta("simulate",
                   {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}, {"x0", x0}, {"n", n},
                    {"seed", seed}},
                   o, err);
  return kOk;
}

int cmd_bridge(const Opts& o, std::ostream& out, std::ostream& err) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  const double delta = o.delta.value_or(kDefaultTruncation);
  EndpointMixture mix;
  if (!o.mixture.empty()) {
    mix = io::mixture_from_json(io::load_json_file(o.mixture));
  } else {
    mix.entries.push_back({endpoint(o.x, model, "--x"), endpoint(o.y, model, "--y"), 1.0});
  }
  const MixtureSampler sampler(rates, model, mix, delta);
  Json mix_json = Json::array();
  for (const auto& e : mix.entries) mix_json.push_back({{"x", e.x}, {"y", e.y}, {"w", e.w}});

  if (o.dist) {
    Json dists = Json::array();
    for (const auto& b : sampler.bridges()) dists.push_back({{"x", b.x()}, {"y", b.y()}, {"law_of_N1", io::to_json(b.distribution())}});
    emit(io::dump(report("bridge", {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)},
                                    {"mixture", mix_json}, {"delta", delta}},
                         std::move(dists))),
         o, out);
    return kOk;
  }
  const auto n = in.n(1);
  if (n < 0) throw InputError("--n must be nonnegative");
  const auto seed = in.seed();
  std::vector<Path> paths(static_cast<std::size_t>(n));
  parallel_for(paths.size(), threads_of(o), [&](std::size_t i) {
    Rng rng(derive_seed(seed, 0, i));
    paths[i] = sampler.sample(rng);
  });
  std::string text;
  for (const auto& p : paths) text += io::path_to_json(p).dump() + "\n";
  emit(text, o, out);
  emit_stream_meta("bridge",
                   {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}, {"mixture", mix_json},
                    {"delta", delta}, {"n", n}, {"seed", seed}},
                   o, err);
  return kOk;
}

int cmd_invariants(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  const auto cs = o.c.empty() ? kernel_basis(model).vectors() : io::parse_vector_list(o.c);
  Json phi = Json::array();
  for (const auto& c : cs) phi.push_back({{"c", io::to_json(c)}, {"phi", phi_invariant(rates, model, c)}});
  const double s = 0.0;
  const double t = o.t.value_or(1.0);
  Json xi = Json::array();
  for (std::size_t j = 0; j < rates.size(); ++j) {
    xi.push_back({{"type", j + 1}, {"s", s}, {"t", t}, {"xi", xi_invariant(rates, j, s, t)}});
  }
  Json result = {{"lambda", rates.lambdas()}, {"homogeneous", rates.homogeneous()}, {"phi", phi}, {"xi", xi}};
  emit(io::dump(report("invariants", {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}},
                       std::move(result))),
       o, out);
  return kOk;
}

int cmd_same_class(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto r1 = in.rates(model);
  if (o.rates2.empty()) throw InputError("same-class needs --rates2");
  const auto r2 = io::rates_from_json(io::load_json_file(o.rates2), model.n_jumps());
  const auto r = o.general ? same_class_general(r1, r2, model) : same_class(r1, r2, model);
  emit(io::dump(report("same-class",
                       {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(r1)},
                        {"rates2", io::rates_to_json(r2)}, {"general", o.general}},
                       io::to_json(r))),
       o, out);
  return kOk;
}

int cmd_verify_timechange(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  TimeChange u = TimeChange::identity(model.n_jumps());
  Json u_json;
  if (!o.warp.empty()) {
    u_json = {{"family", "exp_warp"}, {"a", io::parse_real_list(o.warp)}};
  } else if (!o.timechange.empty() || in.has("timechange")) {
    u_json = in.section(o.timechange, "timechange");
  } else {
    u_json = {{"family", "identity"}};
  }
  u = io::timechange_from_json(u_json, model.n_jumps());

  TimeChangeConfig cfg;
  if (!o.nstar.empty()) {
    cfg.nstar = io::parse_count_list(o.nstar);
  } else if (auto v = in.test("nstar")) {
    cfg.nstar = io::counts_from_json(*v);
  } else {
    cfg.nstar.assign(model.n_jumps(), 1);
  }
  cfg.n = in.n(100000);
  cfg.seed = in.seed();
  cfg.z_crit = in.z_crit();
  std::string reading = "girsanov";
  if (o.reading) {
    reading = *o.reading;
  } else if (auto v = in.test("reading")) {
    reading = v->get<std::string>();
  }
  cfg.reading = parse_reading(reading);
  cfg.threads = threads_of(o);

  const auto r = verify_time_change(rates, u, cfg);
  Json config = {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}, {"timechange", u_json},
                 {"test", {{"target", "timechange"}, {"reading", reading}, {"nstar", cfg.nstar}}},
                 {"n", cfg.n},  {"seed", cfg.seed}, {"z_crit", cfg.z_crit}};
  emit(io::dump(report("verify timechange", std::move(config), io::to_json(r))), o, out);
  return r.pass ? kOk : kVerificationFailed;
}

int cmd_verify_shift(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  std::vector<LatticeVector> gamma;
  if (!o.gamma.empty()) {
    gamma = io::parse_vector_list(o.gamma);
  } else if (in.has("gamma")) {
    gamma = io::vectors_from_json(in.config().at("gamma"));
  } else {
    gamma = kernel_basis(model).vectors();
  }
  std::string source = o.source;
  if (source.empty()) source = in.test("source") ? in.test("source")->get<std::string>() : "free";
  ShiftConfig cfg;
  cfg.n = in.n(100000);
  cfg.seed = in.seed();
  cfg.z_crit = in.z_crit();
  cfg.threads = threads_of(o);

  Json config = {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}, {"gamma", io::to_json(gamma)}};
  std::optional<MixtureSampler> sampler;
  CountSource counts;
  if (source == "free") {
    counts = free_count_source(rates);
    config["test"] = {{"target", "shift"}, {"source", source}};
  } else if (source == "mixture") {
    Json mj;
    if (!o.mixture.empty()) {
      mj = io::load_json_file(o.mixture);
    } else if (auto v = in.test("mixture")) {
      mj = *v;
    } else {
      throw InputError("--source mixture needs --mixture");
    }
    sampler.emplace(rates, model, io::mixture_from_json(mj));
    counts = mixture_count_source(*sampler);
    config["test"] = {{"target", "shift"}, {"source", source}, {"mixture", mj}};
  } else {
    throw InputError("--source must be free or mixture");
  }
  config["n"] = cfg.n;
  config["seed"] = cfg.seed;
  config["z_crit"] = cfg.z_crit;
  const auto r = verify_shift_N1(counts, rates, model, gamma, cfg);
  emit(io::dump(report("verify shift", std::move(config), io::to_json(r))), o, out);
  return r.pass ? kOk : kVerificationFailed;
}

int cmd_verify_ctdns(const Opts& o, std::ostream& out) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  double t = 0.5;
  if (o.t) {
    t = *o.t;
  } else if (auto v = in.test("t")) {
    t = v->get<double>();
  }
  std::vector<LatticeVector> cs;
  if (!o.c.empty()) {
    cs = io::parse_vector_list(o.c);
  } else if (auto v = in.test("c")) {
    cs = {io::lattice_from_json(*v)};
  } else {
    cs = kernel_basis(model).vectors();
  }
  std::string variant = "derived";
  if (o.variant) {
    variant = *o.variant;
  } else if (auto v = in.test("variant")) {
    variant = v->get<std::string>();
  }
  const double delta = o.delta.value_or(kDefaultTruncation);
  Json results = Json::array();
  bool pass = true;
  for (const auto& c : cs) {
    const auto r = verify_ctdns(rates, model, t, c, parse_variant(variant), delta);
    pass = pass && r.pass;
    results.push_back(io::to_json(r));
  }
  Json config = {{"model", io::model_to_json(model)},
                 {"rates", io::rates_to_json(rates)},
                 {"test", {{"target", "ctdns"}, {"t", t}, {"c", io::to_json(cs)}, {"variant", variant}}},
                 {"delta", delta}};
  emit(io::dump(report("verify ctdns", std::move(config), {{"pass", pass}, {"checks", results}})), o, out);
  return pass ? kOk : kVerificationFailed;
}

int cmd_verify_chen(const Opts& o, std::ostream& out) {
  Inputs in(o);
  std::vector<double> lambda;
  if (!o.lambda.empty()) {
    lambda = io::parse_real_list(o.lambda);
  } else if (auto v = in.test("lambda")) {
    lambda = v->get<std::vector<double>>();
  } else {
    throw InputError("verify chen needs --lambda");
  }
  std::vector<LatticeVector> cs;
  if (!o.c.empty()) {
    cs = io::parse_vector_list(o.c);
  } else {
    for (std::size_t j = 0; j < lambda.size(); ++j) {
      LatticeVector e(lambda.size(), 0);
      e[j] = 1;
      cs.push_back(std::move(e));
    }
  }
  const double delta = o.delta.value_or(kDefaultTruncation);
  const auto r = verify_chen(lambda, cs, delta);
  Json config = {{"test", {{"target", "chen"}, {"lambda", lambda}, {"c", io::to_json(cs)}}}, {"delta", delta}};
  emit(io::dump(report("verify chen", std::move(config), io::to_json(r))), o, out);
  return r.pass ? kOk : kVerificationFailed;
}

int cmd_cycle(const Opts& o, std::ostream& out, std::ostream& err) {
  Inputs in(o);
  const auto model = in.model();
  const auto rates = in.rates(model);
  if (o.cycle.empty()) throw InputError("cycle-asymptotics needs --cycle (positions, e.g. 0,1,0)");
  const auto cycle = Cycle::from_positions(model, parse_positions(o.cycle, model));
  const auto eps = o.eps.empty() ? std::vector<double>{0.2, 0.1, 0.05} : io::parse_real_list(o.eps);
  const double t = o.t.value_or(0.0);
  const auto n = in.n(100000);
  const auto seed = in.seed();
  const double z = in.z_crit();

  std::optional<MixtureSampler> sampler;
  PathSource source;
  std::string source_name = o.source.empty() ? "free" : o.source;
  Json config = {{"model", io::model_to_json(model)}, {"rates", io::rates_to_json(rates)}, {"cycle", o.cycle}};
  if (source_name == "free") {
    const auto x0 = endpoint(o.x, model, "--x");
    source = [&rates, x0](Rng& rng) { return sample_cpp(x0, rates, rng); };
  } else if (source_name == "bridge") {
    EndpointMixture mix;
    if (!o.mixture.empty()) {
      mix = io::mixture_from_json(io::load_json_file(o.mixture));
    } else {
      mix.entries.push_back({endpoint(o.x, model, "--x"), endpoint(o.y, model, "--y"), 1.0});
    }
    sampler.emplace(rates, model, mix);
    source = [&sampler](Rng& rng) { return sampler->sample(rng); };
    Json mix_json = Json::array();
    for (const auto& e : mix.entries) mix_json.push_back({{"x", e.x}, {"y", e.y}, {"w", e.w}});
    config["mixture"] = mix_json;
  } else {
    throw InputError("--source must be free or bridge");
  }
  config["source"] = source_name;
  config["t"] = t;
  config["eps"] = eps;
  config["n"] = n;
  config["seed"] = seed;
  config["z_crit"] = z;
  auto limit = [&](double e) { return cycle_limit(rates, model, cycle, e); };
  const auto rows = cycle_asymptotics_estimate(source, cycle, t, eps, n, seed, z, limit, threads_of(o));
  emit(cycle_table_csv(rows), o, out);
  emit_stream_meta("cycle-asymptotics", std::move(config), o, err);
  return kOk;
}

int cmd_counterexample(const Opts& o, std::ostream& out) {
  if (!o.preset.empty() && o.preset != "345") throw InputError("unknown preset '" + o.preset + "' (only 345)");
  double eps = 0.3;
  if (!o.eps.empty()) {
    const auto v = io::parse_real_list(o.eps);
    if (v.size() != 1) throw InputError("--eps takes one value here");
    eps = v.front();
  }
  const auto lambda = o.lambda.empty() ? std::vector<double>{1.0, 1.0, 1.0} : io::parse_real_list(o.lambda);
  const double delta = o.delta.value_or(kDefaultTruncation);
  const auto r = counterexample_345(eps, lambda, delta);
  Json result = io::to_json(r);
  const bool shown = r.shifts_pass && !r.membership.member && r.unique_move;
  result["summary"] = shown ? "shift identities pass, membership fails" : "counterexample not reproduced";
  emit(io::dump(report("counterexample", {{"preset", "345"}, {"eps", eps}, {"lambda", lambda}, {"delta", delta}},
                       std::move(result))),
       o, out);
  return shown ? kOk : kVerificationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact lattice analysis, simulation and identity checks for compound Poisson reciprocal classes", "recip"};
  app.require_subcommand(1);
  Opts o;
  std::function<int()> action;

  auto* kernel = app.add_subcommand("kernel", "Canonical basis of the integer kernel of the jump matrix");
  add_flags(kernel, o, kModel);
  kernel->add_option("--compare", o.compare, "Vectors whose lattice is compared with the kernel");
  kernel->callback([&] { action = [&] { return cmd_kernel(o, out); }; });

  auto* genset = app.add_subcommand("genset-check", "Connectivity of fiber graphs for a candidate generating set");
  add_flags(genset, o, kModel | kGamma | kBox);
  genset->add_option("--points", o.points, "Seed count vectors, e.g. \"(6,1,2);(3,0,0)\"");
  genset->callback([&] { action = [&] { return cmd_genset(o, out); }; });

  auto* simulate = app.add_subcommand("simulate", "Sample compound Poisson paths as JSONL");
  add_flags(simulate, o, kModel | kRates | kN | kSeed | kThreads);
  simulate->add_option("--x0", o.x0, "Initial point (default 0)");
  simulate->callback([&] { action = [&] { return cmd_simulate(o, out, err); }; });

  auto* bridge = app.add_subcommand("bridge", "Sample bridges or reciprocal mixtures as JSONL");
  add_flags(bridge, o, kModel | kRates | kMixture | kN | kSeed | kThreads | kEndpoints | kDelta);
  bridge->add_flag("--dist", o.dist, "Print the conditional law of N_1 instead of paths");
  bridge->callback([&] { action = [&] { return cmd_bridge(o, out, err); }; });

  auto* inv = app.add_subcommand("invariants", "Space invariants Phi and time invariants Xi(j, 0, t)");
  add_flags(inv, o, kModel | kRates | kT);
  inv->add_option("--c", o.c, "Kernel vectors (default: the kernel basis)");
  inv->callback([&] { action = [&] { return cmd_invariants(o, out); }; });

  auto* same = app.add_subcommand("same-class", "Decide whether two rate sets share their bridges");
  add_flags(same, o, kModel | kRates | kRates2);
  same->add_flag("--general", o.general, "Allow time-inhomogeneous rates (adds the Xi comparison)");
  same->callback([&] { action = [&] { return cmd_same_class(o, out); }; });

  auto* verify = app.add_subcommand("verify", "Statistical and exact checks of the characterization identities");
  verify->require_subcommand(1);
  auto* vt = verify->add_subcommand("timechange", "Time-change duality by Monte Carlo");
  add_flags(vt, o, kModel | kRates | kN | kSeed | kZCrit | kThreads | kReading | kConfig);
  vt->add_option("--timechange", o.timechange, "Time change JSON file");
  vt->add_option("--warp", o.warp, "exp_warp parameters per type, e.g. 1,0");
  vt->add_option("--nstar", o.nstar, "Target count vector for the indicator functional");
  vt->callback([&] { action = [&] { return cmd_verify_timechange(o, out); }; });
  auto* vs = verify->add_subcommand("shift", "Shift identity on the law of N_1 by Monte Carlo");
  add_flags(vs, o, kModel | kRates | kMixture | kGamma | kN | kSeed | kZCrit | kThreads | kConfig);
  vs->add_option("--source", o.source, "free or mixture");
  vs->callback([&] { action = [&] { return cmd_verify_shift(o, out); }; });
  auto* vc = verify->add_subcommand("ctdns", "Exact time-t shift identity under the free process");
  add_flags(vc, o, kModel | kRates | kT | kVariant | kConfig | kDelta | kSeed | kThreads);
  vc->add_option("--c", o.c, "Kernel vectors (default: the kernel basis)");
  vc->callback([&] { action = [&] { return cmd_verify_ctdns(o, out); }; });
  auto* vch = verify->add_subcommand("chen", "Exact shift identity for the multivariate Poisson law");
  add_flags(vch, o, kConfig | kDelta | kSeed | kThreads);
  vch->add_option("--lambda", o.lambda, "Poisson parameters, e.g. 0.5,1.5");
  vch->add_option("--c", o.c, "Shift vectors (default: unit vectors)");
  vch->callback([&] { action = [&] { return cmd_verify_chen(o, out); }; });

  auto* cyc = app.add_subcommand("cycle-asymptotics", "Short-time cycle frequencies as CSV");
  add_flags(cyc, o, kModel | kRates | kMixture | kEps | kT | kN | kSeed | kZCrit | kThreads | kEndpoints);
  cyc->add_option("--cycle", o.cycle, "Cycle as positions, e.g. 0,1,0 or \"(0,0);(1,0);(0,0)\"");
  cyc->add_option("--source", o.source, "free (default) or bridge");
  cyc->callback([&] { action = [&] { return cmd_cycle(o, out, err); }; });

  auto* ce = app.add_subcommand("counterexample", "Shift identities without class membership");
  add_flags(ce, o, kEps | kDelta);
  ce->add_option("--preset", o.preset, "Preset name (345)");
  ce->add_option("--lambda", o.lambda, "Poisson parameters (default 1,1,1)");
  ce->callback([&] { action = [&] { return cmd_counterexample(o, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  try {
    return action ? action() : kInputError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const Json::exception& e) {
    err << "error: bad JSON value: " << e.what() << "\n";
  }
  return kInputError;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace recip::cli
