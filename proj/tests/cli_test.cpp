// Copyright 2026 The lossyboson Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "lossyboson/cli.hpp"

namespace lossyboson {
namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "lossyboson");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lossyboson_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, NetBuildReck) {
  const auto r = run({"net", "build", "--geometry", "reck", "--modes", "6", "--eta", "0.98", "--out", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto net = io::network_from_json(io::parse(io::read_file(path("r.json"))));
  EXPECT_EQ(net.elements().size(), 15u);
  EXPECT_EQ(net.modes(), 6);
}

TEST_F(CliTest, NetRoundTripIsByteIdentical) {
  ASSERT_EQ(run({"net", "build", "--geometry", "clements", "--modes", "5", "--eta", "0.9", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"net", "build", "--geometry", "file", "--in", path("a.json"), "--out", path("b.json")}).code, 0);
  EXPECT_EQ(io::read_file(path("a.json")), io::read_file(path("b.json")));
}

TEST_F(CliTest, NetPathsGrowFromTheBottom) {
  ASSERT_EQ(run({"net", "build", "--modes", "6", "--eta", "0.98", "--out", path("r.json")}).code, 0);
  const auto r = run({"net", "paths", "--in", path("r.json")});
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse(r.out);
  EXPECT_EQ(j["exponents"], io::json({1, 2, 3, 4, 5, 5}));
  EXPECT_EQ(j["exponents"], j["enumerated_min_length"]);
}

TEST_F(CliTest, NetExtractIsChannelEquivalent) {
  ASSERT_EQ(run({"net", "build", "--modes", "3", "--eta", "0.7", "--out", path("r.json")}).code, 0);
  const auto r = run({"net", "extract", "--in", path("r.json")});
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse(r.out);
  const auto residual = io::network_from_json(j["residual"]);
  const LossVector front(j["front"].get<std::vector<double>>());
  const auto net = io::network_from_json(io::parse(io::read_file(path("r.json"))));
  const OccupationVector s({1, 1, 1});
  EXPECT_LT(tv_distance(dilated_lossy_distribution(net, s), dilated_lossy_distribution(with_front_losses(residual, front), s)),
            1e-9);
}

TEST_F(CliTest, ProbHongOuMandelAndIdentity) {
  io::write_file(path("hom.json"), io::dump(io::to_json(LossyNetwork(2, {BeamSplitterElement{}}))));
  auto r = run({"prob", "--network", path("hom.json"), "--input", "1,1", "--output", "1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(io::parse(r.out)["probability"].get<double>(), 0.0, 1e-15);
  io::write_file(path("id.json"), io::dump(io::to_json(UnitaryMatrix::identity(3))));
  r = run({"prob", "--unitary", path("id.json"), "--input", "[2,0,1]", "--output", "2,0,1"});
  ASSERT_EQ(r.code, 0);
  const auto j = io::parse(r.out);
  EXPECT_NEAR(j["probability"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(j["tau_st"].get<int>(), 6 * 2 * 2);
}

TEST_F(CliTest, ProbMatchesOracle) {
  ASSERT_EQ(run({"unitary", "--modes", "4", "--seed", "12", "--out", path("u.json")}).code, 0);
  const auto u = io::unitary_from_json(io::parse(io::read_file(path("u.json"))));
  const OccupationVector s({2, 1, 0, 0}), t({0, 1, 1, 1});
  const auto r = run({"prob", "--unitary", path("u.json"), "--input", "2,1,0,0", "--output", "0,1,1,1"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NEAR(io::parse(r.out)["probability"].get<double>(), exact_distribution(u, s).entries.at(t), 1e-12);
}

TEST_F(CliTest, SampleUnitaryIsDeterministic) {
  ASSERT_EQ(run({"unitary", "--modes", "4", "--out", path("u.json")}).code, 0);
  const std::vector<std::string> base{"sample", "--unitary", path("u.json"), "--input", "2,1,0,0", "--shots", "200", "--seed", "5"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv"), "--report", path("rep.json")});
  b.insert(b.end(), {"--out", path("b.csv"), "--threads", "3"});
  ASSERT_EQ(run(a).code, 0);
  ASSERT_EQ(run(b).code, 0);
  const std::string csv = io::read_file(path("a.csv"));
  EXPECT_EQ(csv, io::read_file(path("b.csv")));
  EXPECT_EQ(csv.rfind("shot_index,outcome,probability\n0,", 0), 0u);
  const auto rep = io::parse(io::read_file(path("rep.json")));
  EXPECT_EQ(rep["shots"].get<int>(), 200);
  EXPECT_LE(rep["max_permanents_per_sample"].get<int>(), rep["permanent_bound_per_sample"].get<int>());
}

TEST_F(CliTest, SampleLossyNetworkEmitsCertificate) {
  ASSERT_EQ(run({"net", "build", "--modes", "6", "--eta", "0.8", "--out", path("r.json")}).code, 0);
  const std::vector<std::string> args{"sample",        "--network", path("r.json"), "--input", "1,1,1,1,0,0",
                                      "--shots",       "50",        "--certificate", path("c.json")};
  const auto a = run(args), b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto cert = io::parse(io::read_file(path("c.json")));
  EXPECT_EQ(cert["n"].get<int>(), 4);
  EXPECT_EQ(cert["strategy"].get<std::string>(), "single-bin");
  EXPECT_EQ(cert.size(), 8u);
}

TEST_F(CliTest, SampleGateTripExitsThree) {
  ASSERT_EQ(run({"net", "build", "--modes", "6", "--eta", "0.8", "--out", path("r.json")}).code, 0);
  const auto r = run({"sample", "--network", path("r.json"), "--input", "1,1,1,1,0,0", "--c", "10", "--kappa", "1"});
  EXPECT_EQ(r.code, 3);
}

TEST_F(CliTest, ValidateSuites) {
  auto r = run({"validate", "permanents"});
  EXPECT_EQ(r.code, 0) << r.out;
  r = run({"validate", "extraction"});
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(run({"validate", "nonsense"}).code, 2);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"net", "build", "--geometry", "hexagon"}).code, 2);
  EXPECT_EQ(run({"net", "paths", "--in", path("missing.json")}).code, 2);
  io::write_file(path("bad.json"), "{\"modes\": 2");
  EXPECT_EQ(run({"net", "extract", "--in", path("bad.json")}).code, 2);
  ASSERT_EQ(run({"unitary", "--modes", "2", "--out", path("u.json")}).code, 0);
  EXPECT_EQ(run({"prob", "--unitary", path("u.json"), "--input", "1,1", "--output", "2,1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, DeskLimitsAreHonoured) {
  EXPECT_EQ(run({"--desk-limits", "exact_max_photons=1", "validate", "sampler"}).code, 3);
  EXPECT_EQ(run({"--desk-limits", "nonsense=1", "validate", "permanents"}).code, 2);
}

TEST_F(CliTest, BenchEmitsRows) {
  const auto r = run({"bench", "--class", "A", "--sizes", "4:6", "--modes", "6", "--shots", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 3);
  EXPECT_EQ(r.out.rfind("n,m,input,permanent_evaluations,permanent_bound,prediction", 0), 0u);
}

}  // namespace
}  // namespace lossyboson
