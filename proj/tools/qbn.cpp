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

// qbn: scenario runner and verification suite.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qbn/errors.hpp"
#include "qbn/io.hpp"
#include "qbn/scenario.hpp"
#include "qbn/suite.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitSchema = 2;
constexpr int kExitCapacity = 3;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qbn::SchemaError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return nlohmann::json::parse(buf.str());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

int run_scenario_command(const std::string& config, const std::string& out_dir) {
  try {
    const qbn::ScenarioConfig cfg = qbn::io::scenario_from_json(read_json(config));
    const qbn::ScenarioArtifacts art = qbn::run_scenario(cfg);
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", art.report.dump(2) + "\n");
    write_file(fs::path(out_dir) / "timeseries.csv", art.timeseries_csv);
    if (!art.classical_csv.empty()) write_file(fs::path(out_dir) / "classical.csv", art.classical_csv);
    for (const auto& r : art.report.at("checks")) {
      if (!r.at("pass").get<bool>()) std::cerr << "FAILED " << r.dump() << "\n";
    }
    return art.pass ? kExitOk : kExitFailed;
  } catch (const qbn::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const qbn::Error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  }
}

struct VerifyOptions {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  std::string only;
  bool negative_control = false;
  std::optional<double> tolerance_scale;
};

qbn::SuiteConfig suite_config(const VerifyOptions& opt) {
  qbn::SuiteConfig cfg;
  if (!opt.config.empty()) {
    const nlohmann::json j = read_json(opt.config);
    if (!j.is_object()) throw qbn::SchemaError("suite config must be an object");
    cfg.seed = j.value("seed", cfg.seed);
    cfg.modes = j.value("modes", cfg.modes);
    cfg.kernels_per_mode = j.value("kernels_per_mode", cfg.kernels_per_mode);
    cfg.max_evolution_modes = j.value("max_evolution_modes", cfg.max_evolution_modes);
    cfg.only = j.value("only", cfg.only);
    cfg.negative_control = j.value("negative_control", cfg.negative_control);
    cfg.tolerance_scale = j.value("tolerance_scale", cfg.tolerance_scale);
    for (int m : cfg.modes) qbn::ModeCount{m};
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (!opt.only.empty()) cfg.only = opt.only;
  if (opt.negative_control) cfg.negative_control = true;
  if (opt.tolerance_scale) cfg.tolerance_scale = *opt.tolerance_scale;
  if (!cfg.only.empty()) {
    const auto& fams = qbn::suite_families();
    if (std::find(fams.begin(), fams.end(), cfg.only) == fams.end()) {
      throw qbn::SchemaError("unknown check family '" + cfg.only + "'");
    }
  }
  return cfg;
}

int run_verify_command(const VerifyOptions& opt) {
  qbn::SuiteConfig cfg;
  try {
    cfg = suite_config(opt);
  } catch (const qbn::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  }
  const qbn::SuiteResult result = qbn::run_verification_suite(cfg);
  fs::create_directories(opt.out);
  write_file(fs::path(opt.out) / "suite.json", qbn::suite_to_json(result, cfg).dump(2) + "\n");
  write_file(fs::path(opt.out) / "suite_timing.json", qbn::suite_timing_to_json(result).dump(2) + "\n");
  for (const auto& c : result.checks) {
    if (!c.pass()) std::cout << "FAIL " << c.name << " max_residual=" << qbn::max_residual(c.reports) << "\n";
  }
  std::cout << result.passed() << " passed, " << result.failed() << " failed, " << result.checks.size()
            << " checks\n";
  return result.exit_code();
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum Bernoulli noise operators and the quantum exclusion semigroup"};
  app.require_subcommand(1);

  std::string config, out = ".";
  auto* run = app.add_subcommand("run", "Build a model from a scenario, evolve it and export expectations");
  run->add_option("--config", config, "Scenario JSON")->required();
  run->add_option("--out", out, "Output directory");

  VerifyOptions vopt;
  auto* verify = app.add_subcommand("verify", "Run every identity and property check");
  verify->add_option("--config", vopt.config, "Suite configuration JSON");
  verify->add_option("--out", vopt.out, "Output directory");
  verify->add_option("--seed", vopt.seed, "Master seed");
  verify->add_option("--only", vopt.only, "Run a single check family");
  verify->add_flag("--negative-control", vopt.negative_control, "Swap in a wrong annihilator-commutator coefficient; the suite must fail");
  verify->add_option("--tolerance-scale", vopt.tolerance_scale, "Multiply every tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitSchema;
  }
  if (*run) return run_scenario_command(config, out);
  return run_verify_command(vopt);
}
