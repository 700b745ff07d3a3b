// Copyright 2026 The qbn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "qbn/io.hpp"
#include "qbn/scenario.hpp"
#include "qbn/suite.hpp"

namespace qbn {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else cell += ch;
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("qbn_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QBN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(IoTest, KernelPresetsAndExplicit) {
  const TransitionKernel c = io::kernel_from_json(json{{"n", 3}, {"type", "canonical"}});
  EXPECT_EQ(c.table(), Eigen::MatrixXd::Identity(3, 3));
  const TransitionKernel nn =
      io::kernel_from_json(json{{"n", 3}, {"type", "nearest_neighbor"}, {"params", {{"a", 1}, {"b", 2}, {"d", 3}}}});
  EXPECT_EQ(nn.table(), TransitionKernel::nearest_neighbor(ModeCount(3), 1, 2, 3).table());
  const TransitionKernel e = io::kernel_from_json(json{{"n", 2}, {"type", "explicit"}, {"table", {{1, 2}, {3, 4}}}});
  EXPECT_EQ(e.weight(0, 1), 2.0);
  EXPECT_EQ(e.weight(1, 0), 3.0);
  EXPECT_EQ(io::kernel_from_json(io::kernel_to_json(e)).table(), e.table());
  EXPECT_EQ(io::kernel_from_json(json{{"type", "canonical"}}, ModeCount(2)).modes().value(), 2);
}

TEST(IoTest, KernelErrors) {
  EXPECT_THROW(io::kernel_from_json(json{{"n", 2}, {"type", "bogus"}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"type", "canonical"}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 0}, {"type", "canonical"}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 2}, {"type", "explicit"}, {"table", {{1, -2}, {3, 4}}}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 2}, {"type", "explicit"}, {"table", {{1, 2}}}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 2}, {"type", "explicit"}, {"table", {{1, 2}, {3}}}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 2}, {"type", "explicit"}, {"table", {{1, "x"}, {3, 4}}}}), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 3}, {"type", "canonical"}}, ModeCount(2)), SchemaError);
  EXPECT_THROW(io::kernel_from_json(json{{"n", 21}, {"type", "canonical"}}), CapacityError);
  EXPECT_THROW(io::kernel_from_json(json::array()), SchemaError);
}

TEST(IoTest, WeightAndHamiltonian) {
  const WeightFunction u = io::weight_from_json(json{{"n", 2}, {"u", {0.5, 1.5}}});
  EXPECT_EQ(u[1], 1.5);
  EXPECT_THROW(io::weight_from_json(json{{"n", 2}, {"u", {0.5}}}), SchemaError);
  const HamiltonianTable h = io::hamiltonian_from_json(json{{"type", "one_body"}, {"epsilon", {1.0, 2.0}}}, ModeCount(2));
  EXPECT_EQ(h.values()[3], 3.0);
  EXPECT_EQ(io::hamiltonian_from_json(json{{"type", "explicit"}, {"table", {0, 1, 2, 3}}}, ModeCount(2)).values()[2], 2.0);
  EXPECT_THROW(io::hamiltonian_from_json(json{{"type", "explicit"}, {"table", {0, 1}}}, ModeCount(2)), SchemaError);
  EXPECT_THROW(io::hamiltonian_from_json(json{{"type", "bogus"}}, ModeCount(2)), SchemaError);
}

TEST(IoTest, Subsets) {
  const ModeCount n(4);
  EXPECT_EQ(io::subset_from_json(json{0, 2}, n), SubsetIndex::from_modes({0, 2}));
  EXPECT_EQ(io::subset_to_string(SubsetIndex::from_modes({1, 3})), "[1,3]");
  EXPECT_THROW(io::subset_from_json(json{4}, n), SchemaError);
  EXPECT_THROW(io::subset_from_json(json{1, 1}, n), SchemaError);
}

TEST(IoTest, FormatDoubleRoundTrips) {
  std::mt19937_64 rng(301);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, static_cast<int>(rng() % 40) - 20);
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::format_double(0.1), "0.1");
}

json canonical_scenario() {
  return json{{"modes", 3},
              {"kernel", {{"type", "canonical"}}},
              {"times", {0, 1, 2}},
              {"observables", {"number", "identity", {{"occupancy", 1}}}},
              {"initial_state", {{"type", "mixture"}, {"weights", {{"[0]", 0.25}, {"[1,2]", 0.75}}}}}};
}

TEST(ScenarioTest, CanonicalNumberIsConstant) {
  const ScenarioArtifacts art = run_scenario(io::scenario_from_json(canonical_scenario()));
  const auto rows = parse_csv(art.timeseries_csv);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"t", "number", "identity", "occupancy_1"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][1]), 1.75, 1e-12);
    EXPECT_NEAR(std::stod(rows[i][2]), 1.0, 1e-12);
    EXPECT_NEAR(std::stod(rows[i][3]), 0.75, 1e-12);
  }
  EXPECT_TRUE(art.classical_csv.empty());
  EXPECT_EQ(art.report.at("modes"), 3);
  EXPECT_EQ(art.report.at("kernel").at("alpha"), 1.0);
  EXPECT_EQ(art.report.at("kernel").at("regular"), true);
  EXPECT_EQ(art.report.at("weighted_number_norm"), 3.0);
}

TEST(ScenarioTest, ZeroKernelIsUnitary) {
  json j{{"modes", 2},
         {"kernel", {{"type", "explicit"}, {"table", {{0, 0}, {0, 0}}}}},
         {"hamiltonian", {{"type", "one_body"}, {"epsilon", {0.3, 0.9}}}},
         {"times", {0.5, 1.5}},
         {"observables", {"number"}},
         {"initial_state", {{"type", "basis"}, {"subset", {0}}}},
         {"checks", {"markov", "decoherence_free"}}};
  const ScenarioArtifacts art = run_scenario(io::scenario_from_json(j));
  EXPECT_EQ(art.report.at("weighted_number_norm"), 0.0);
  EXPECT_EQ(art.report.at("jump_count"), 0);
  EXPECT_EQ(art.report.at("kernel").at("regular"), false);
  EXPECT_TRUE(art.pass);
  const auto rows = parse_csv(art.timeseries_csv);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(std::stod(rows[i][1]), 1.0);
}

TEST(ScenarioTest, ClassicalTwoState) {
  json j{{"modes", 2},
         {"kernel", {{"type", "explicit"}, {"table", {{0, 0}, {1, 0}}}}},
         {"times", {0, 1}},
         {"observables", {{{"occupancy", 1}}}},
         {"initial_state", {{"type", "basis"}, {"subset", {0}}}},
         {"checks", {"classical"}},
         {"gillespie", {{"trials", 100000}, {"seed", 3}}}};
  const ScenarioArtifacts art = run_scenario(io::scenario_from_json(j));
  EXPECT_TRUE(art.pass);
  const auto ts = parse_csv(art.timeseries_csv);
  EXPECT_EQ(ts[0].back(), "tv_classical");
  EXPECT_NEAR(std::stod(ts[2][1]), 1.0 - std::exp(-1.0), 1e-10);
  EXPECT_LE(std::stod(ts[2][2]), 1e-6);
  const auto cl = parse_csv(art.classical_csv);
  ASSERT_EQ(cl.size(), 1u + 2u * 4u);
  EXPECT_EQ(cl[0], (std::vector<std::string>{"t", "configuration", "quantum", "classical_ode", "gillespie"}));
  const auto& row = cl[4 + 3];  // t = 1, configuration {1}
  EXPECT_EQ(row[1], "[1]");
  EXPECT_NEAR(std::stod(row[2]), 1.0 - std::exp(-1.0), 1e-10);
  EXPECT_NEAR(std::stod(row[3]), 1.0 - std::exp(-1.0), 1e-10);
  EXPECT_NEAR(std::stod(row[4]), 1.0 - std::exp(-1.0), 0.01);
}

TEST(ScenarioTest, SchemaErrors) {
  auto bad = [](auto mutate) {
    json j = canonical_scenario();
    mutate(j);
    return j;
  };
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j.erase("modes"); })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["times"] = {2, 1}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["times"] = {-1}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["times"] = json::array(); })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["observables"] = {"spin"}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["observables"] = {{{"occupancy", 3}}}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["checks"] = {"everything"}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["initial_state"]["weights"]["[0]"] = 0.5; })),
               SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["initial_state"] = {{"type", "basis"}, {"subset", {7}}}; })),
               SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["tolerances"] = {{"nonsense", 1}}; })), SchemaError);
  EXPECT_THROW(io::scenario_from_json(bad([](json& j) { j["method"] = {{"name", "euler"}}; })), SchemaError);
}

TEST(ScenarioTest, ExplicitObservables) {
  json j = canonical_scenario();
  j["observables"] = {{{"explicit", {{"diagonal", {0, 1, 2, 3, 4, 5, 6, 7}}}}},
                      {{"explicit", {{"entries", {{1, 1, 2.0, 0.0}}}}}}};
  const ScenarioConfig cfg = io::scenario_from_json(j);
  EXPECT_EQ(cfg.observables[0].name, "explicit_0");
  EXPECT_EQ(cfg.observables[1].op.entry(SubsetIndex{1}, SubsetIndex{1}), Complex(2.0, 0.0));
}

TEST(ScenarioTest, Deterministic) {
  json j = canonical_scenario();
  j["kernel"] = {{"type", "nearest_neighbor"}, {"params", {{"a", 0.5}, {"b", 1.5}, {"d", 0.2}}}};
  j["checks"] = {"classical"};
  j["gillespie"] = {{"trials", 2000}};
  const ScenarioArtifacts a = run_scenario(io::scenario_from_json(j));
  const ScenarioArtifacts b = run_scenario(io::scenario_from_json(j));
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.timeseries_csv, b.timeseries_csv);
  EXPECT_EQ(a.classical_csv, b.classical_csv);
}

TEST(SuiteTest, FamiliesAndFiltering) {
  SuiteConfig cfg;
  cfg.only = "car";
  const SuiteResult r = run_verification_suite(cfg);
  ASSERT_FALSE(r.checks.empty());
  for (const auto& c : r.checks) EXPECT_EQ(c.family, "car");
  EXPECT_EQ(r.exit_code(), 0);
}

TEST(SuiteTest, NegativeControlFails) {
  SuiteConfig cfg;
  cfg.only = "commutators_2d";
  cfg.negative_control = true;
  const SuiteResult r = run_verification_suite(cfg);
  EXPECT_GT(r.failed(), 0);
  EXPECT_EQ(r.exit_code(), 1);
}

TEST(CliTest, MalformedScenarioExitsTwoWithoutArtifacts) {
  TempDir dir("malformed");
  const fs::path cfg = dir.path() / "bad.json";
  std::ofstream(cfg) << "{\"modes\": 2, \"kernel\": ";
  const fs::path out = dir.path() / "out";
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));
  std::ofstream(cfg) << R"({"modes": 2, "kernel": {"type": "bogus"}, "times": [1], "observables": []})";
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_EQ(run_cli("run --config " + (dir.path() / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(CliTest, CapacityExitsThree) {
  TempDir dir("capacity");
  const fs::path cfg = dir.path() / "big.json";
  std::ofstream(cfg) << R"({"modes": 9, "kernel": {"type": "canonical"}, "times": [1], "observables": ["number"]})";
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir.path() / "out").string()), 3);
  EXPECT_FALSE(fs::exists(dir.path() / "out"));
  std::ofstream(cfg) << R"({"modes": 40, "kernel": {"type": "canonical"}, "times": [1], "observables": ["number"]})";
  EXPECT_EQ(run_cli("run --config " + cfg.string() + " --out " + (dir.path() / "out").string()), 3);
}

TEST(CliTest, RunWritesArtifacts) {
  TempDir dir("run");
  const fs::path cfg = dir.path() / "scenario.json";
  std::ofstream(cfg) << canonical_scenario().dump();
  const fs::path out = dir.path() / "out";
  ASSERT_EQ(run_cli("run --config " + cfg.string() + " --out " + out.string()), 0);
  const json report = json::parse(slurp(out / "report.json"));
  EXPECT_EQ(report.at("pass"), true);
  EXPECT_EQ(slurp(out / "timeseries.csv"), run_scenario(io::scenario_from_json(canonical_scenario())).timeseries_csv);
}

TEST(CliTest, VerifyDefaultAndNegativeControl) {
  TempDir dir("verify");
  ASSERT_EQ(run_cli("verify --out " + dir.path().string()), 0);
  const json suite = json::parse(slurp(dir.path() / "suite.json"));
  EXPECT_GE(suite.at("checks").size(), 60u);
  EXPECT_EQ(suite.at("failed"), 0);
  EXPECT_EQ(run_cli("verify --only commutators_2d --negative-control --out " + dir.path().string()), 1);
  EXPECT_EQ(run_cli("verify --only car --out " + dir.path().string()), 0);
  const json car = json::parse(slurp(dir.path() / "suite.json"));
  for (const auto& c : car.at("checks")) EXPECT_EQ(c.at("family"), "car");
  EXPECT_EQ(run_cli("verify --only nothing --out " + dir.path().string()), 2);
}

} // namespace
} // namespace qbn
