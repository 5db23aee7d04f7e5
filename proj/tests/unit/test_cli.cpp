// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "recip/cli.hpp"
#include "recip/io.hpp"
#include "test_util.hpp"

namespace recip {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return test::data_path(name); }

std::string temp_file(const std::string& name, const std::string& text) {
  const auto path = (std::filesystem::temp_directory_path() / name).string();
  std::ofstream(path) << text;
  return path;
}

TEST(Cli, KernelHexagonMatchesFourVectors) {
  const auto r = run({"kernel", "--model", data("hex.json"), "--compare",
                      "(1,0,0,1,0,0);(0,1,0,0,1,0);(1,0,1,0,1,0);(0,1,0,1,0,1)"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::parse_json(r.out, "out");
  EXPECT_EQ(j.at("schema"), "1");
  EXPECT_EQ(j.at("command"), "kernel");
  EXPECT_TRUE(j.at("config").contains("model"));
  EXPECT_EQ(j.at("result").at("rank"), 4);
  EXPECT_TRUE(j.at("result").at("compare").at("equal_lattice").get<bool>());
}

TEST(Cli, KernelCompareMismatchExitsOne) {
  // These two moves span an index-2 sublattice.
  const auto r = run({"kernel", "--model", data("m345.json"), "--compare", "(2,-4,2);(0,-5,4)"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(io::parse_json(r.out, "out").at("result").at("compare").at("equal_lattice").get<bool>());
}

TEST(Cli, CounterexamplePreset) {
  const auto r = run({"counterexample", "--preset", "345", "--eps", "0.3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::parse_json(r.out, "out");
  EXPECT_EQ(j.at("result").at("summary"), "shift identities pass, membership fails");
  EXPECT_EQ(run({"counterexample", "--preset", "999"}).code, 2);
}

TEST(Cli, SimulateZeroPathsIsEmpty) {
  const auto r = run({"simulate", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--n", "0"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, SimulateMatchesLibrary) {
  const auto r = run({"simulate", "--model", data("pm1.json"), "--rates", data("ramp.json"), "--n", "5", "--seed",
                      "17", "--threads", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rates = io::rates_from_json(io::load_json_file(data("ramp.json")), 2);
  std::string expected;
  for (std::size_t i = 0; i < 5; ++i) {
    Rng rng(derive_seed(17, 0, i));
    expected += io::path_to_json(sample_cpp(std::vector<double>{0.0}, rates, rng)).dump() + "\n";
  }
  EXPECT_EQ(r.out, expected);
  const auto meta = io::parse_json(r.err, "meta");
  EXPECT_EQ(meta.at("config").at("seed"), 17);
}

TEST(Cli, BridgeSamplesEndAtTarget) {
  const auto out = (std::filesystem::temp_directory_path() / "recip_bridge.jsonl").string();
  const auto r = run({"bridge", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--x", "0", "--y", "2",
                      "--n", "50", "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(out);
  std::string line;
  int lines = 0;
  const auto model = test::pm1();
  while (std::getline(in, line)) {
    EXPECT_EQ(io::path_from_json(io::parse_json(line, "line")).position(model)[0], 2.0);
    ++lines;
  }
  EXPECT_EQ(lines, 50);
  EXPECT_TRUE(std::filesystem::exists(out + ".meta.json"));
}

TEST(Cli, BridgeDistribution) {
  const auto r = run({"bridge", "--model", data("pm1.json"), "--rates", data("nu11.json"), "--dist"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = io::parse_json(r.out, "out");
  const auto& support = j.at("result").at(0).at("law_of_N1").at("support");
  EXPECT_NEAR(support.at(0).at("w").get<double>(), 0.4386762798370488, 1e-13);
}

TEST(Cli, InfeasibleEndpointsExitTwoWithResidual) {
  const auto r = run({"bridge", "--model", data("pm1.json"), "--rates", data("nu11.json"), "--x", "0", "--y", "0.5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("residual"), std::string::npos) << r.err;
}

TEST(Cli, MalformedJsonExitsTwo) {
  const auto bad = temp_file("recip_bad.json", "{\"dim\": 1,\n \"jumps\": }\n");
  const auto r = run({"kernel", "--model", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("recip_bad.json:2:"), std::string::npos) << r.err;
}

TEST(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"kernel", "--bogus"}).code, 2);
  EXPECT_EQ(run({"verify", "timechange", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--reading",
                 "other"})
                .code,
            2);
  EXPECT_EQ(run({"kernel"}).code, 2);
}

TEST(Cli, HelpDocumentsFlags) {
  auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* sub : {"kernel", "genset-check", "simulate", "bridge", "invariants", "same-class", "verify",
                          "cycle-asymptotics", "counterexample"}) {
    EXPECT_NE(r.out.find(sub), std::string::npos) << sub;
  }
  r = run({"verify", "timechange", "--help"});
  EXPECT_EQ(r.code, 0);
  for (const char* flag : {"--model", "--rates", "--n", "--seed", "--z-crit", "--out", "--threads", "--reading"}) {
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
  }
}

TEST(Cli, GensetExitCodes) {
  auto r = run({"genset-check", "--model", data("m345.json"), "--gamma", "(2,-4,2);(0,-5,4)", "--points", "(6,1,2)"});
  EXPECT_EQ(r.code, 1);
  auto j = io::parse_json(r.out, "out");
  EXPECT_EQ(j.at("result").at("seeds").at(0).at("components"), 5);
  r = run({"genset-check", "--model", data("pm1.json"), "--gamma", "(1,1)", "--points", "(0,0);(5,2)", "--box", "9,9"});
  EXPECT_EQ(r.code, 0) << r.out;
  j = io::parse_json(r.out, "out");
  EXPECT_TRUE(j.at("result").at("posray").at("cond_i").get<bool>());
}

TEST(Cli, SameClassAndInvariants) {
  auto r = run({"same-class", "--model", data("pm1.json"), "--rates", data("nu14.json"), "--rates2", data("nu22.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::parse_json(r.out, "out").at("result").at("verdict"), "SAME");
  r = run({"same-class", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--rates2", data("nu22.json")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(io::parse_json(r.out, "out").at("result").at("verdict"), "DIFFERENT");
  r = run({"same-class", "--model", data("pm1.json"), "--rates", data("ramp.json"), "--rates2", data("nu22.json")});
  EXPECT_EQ(r.code, 2);

  r = run({"invariants", "--model", data("pm1.json"), "--rates", data("nu12.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(io::parse_json(r.out, "out").at("result").at("phi").at(0).at("phi").get<double>(), 0.5, 1e-15);
}

TEST(Cli, VerifyExitCodes) {
  auto r = run({"verify", "ctdns", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--t", "0.3", "--c",
                "(1,1)"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"verify", "ctdns", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--t", "0.3", "--c", "(1,1)",
           "--variant", "paper"});
  EXPECT_EQ(r.code, 1);
  r = run({"verify", "chen", "--lambda", "0.5,1.5", "--c", "(1,1);(1,-1)"});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"verify", "timechange", "--config", data("timechange.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto j = io::parse_json(r.out, "out");
  EXPECT_EQ(j.at("config").at("n"), 20000);
  EXPECT_EQ(j.at("config").at("seed"), 7);
  EXPECT_FALSE(j.at("config").contains("threads"));
  r = run({"verify", "timechange", "--config", data("timechange.json"), "--reading", "literal"});
  EXPECT_EQ(r.code, 1);
}

TEST(Cli, VerifyReportsIgnoreThreadCount) {
  const std::vector<std::string> base = {"verify", "shift", "--model", data("pm1.json"), "--rates", data("nu12.json"),
                                         "--source", "mixture", "--mixture", data("mix_shift.json"), "--n", "40000"};
  auto a = base, b = base;
  a.insert(a.end(), {"--threads", "1"});
  b.insert(b.end(), {"--threads", "3"});
  const auto ra = run(a), rb = run(b);
  ASSERT_EQ(ra.code, 0) << ra.err;
  EXPECT_EQ(ra.out, rb.out);
}

TEST(Cli, CycleTable) {
  const auto r = run({"cycle-asymptotics", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--cycle",
                      "0,1,0", "--eps", "0.2,0.1", "--n", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "eps,n,hits,p_hat,ci_lo,ci_hi,ratio_to_limit");
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
  EXPECT_EQ(run({"cycle-asymptotics", "--model", data("pm1.json"), "--rates", data("nu12.json"), "--cycle", "0,1"}).code,
            2);
}

}  // namespace
}  // namespace recip
