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

#pragma once

// Scenario runner: builds a model from a scenario document, evolves the
// initial state over the requested times and renders report.json,
// timeseries.csv and (when the classical check is requested) classical.csv.
// Everything is rendered in memory so a failure leaves no partial output.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbn/errors.hpp"
#include "qbn/exclusion.hpp"
#include "qbn/fock.hpp"
#include "qbn/io.hpp"
#include "qbn/report.hpp"
#include "qbn/semigroup.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

struct Observable {
  std::string name;
  LinearOperator op;
};

struct ScenarioConfig {
  TransitionKernel kernel;
  HamiltonianTable hamiltonian;
  std::vector<double> times;
  std::vector<Observable> observables;
  Eigen::VectorXd initial_populations;  // used when the initial state is diagonal
  DenseMatrix initial_state;
  std::vector<std::string> checks;
  Tolerances tolerances;
  EvolutionParams method;
  std::int64_t gillespie_trials = 100000;
  std::uint64_t seed = 1;
};

struct ScenarioArtifacts {
  nlohmann::json report;
  std::string timeseries_csv;
  std::string classical_csv;  // empty unless the classical check ran
  bool pass = true;
};

namespace io {

inline Tolerances tolerances_from_json(const json& j, Tolerances t) {
  if (!j.is_object()) throw SchemaError("tolerances must be an object");
  const std::map<std::string, double*> fields = {
      {"exact", &t.exact},
      {"weighted", &t.weighted},
      {"admissibility", &t.admissibility},
      {"explicit_semigroup", &t.explicit_semigroup},
      {"evolution", &t.evolution},
      {"semigroup_law", &t.semigroup_law},
      {"trace", &t.trace},
      {"diagonal_tv", &t.diagonal_tv},
      {"off_diagonal", &t.off_diagonal},
      {"gillespie", &t.gillespie},
  };
  for (const auto& [key, value] : j.items()) {
    const auto it = fields.find(key);
    if (it == fields.end()) throw SchemaError("unknown tolerance '" + key + "'");
    *it->second = as_number(value, "tolerance");
  }
  return t;
}

inline EvolutionParams method_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("method must be an object");
  EvolutionParams p;
  if (j.contains("name")) {
    const std::string name = j.at("name").is_string() ? j.at("name").get<std::string>() : "";
    if (name == "automatic") p.method = EvolutionMethod::automatic;
    else if (name == "exact_exponential") p.method = EvolutionMethod::exact_exponential;
    else if (name == "adaptive_stepping") p.method = EvolutionMethod::adaptive_stepping;
    else throw SchemaError("unknown method name");
  }
  if (j.contains("tolerance")) {
    p.tolerance = as_number(j.at("tolerance"), "method.tolerance");
    if (p.tolerance <= 0.0) throw SchemaError("method.tolerance must be positive");
  }
  if (j.contains("max_exact_dimension")) {
    p.max_exact_dimension = as_int(j.at("max_exact_dimension"), "method.max_exact_dimension");
  }
  return p;
}

inline Observable observable_from_json(const json& j, ModeCount n, std::size_t index) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "identity") return {"identity", LinearOperator::identity(n)};
    if (s == "number") return {"number", number_operator(n)};
    throw SchemaError("unknown observable '" + s + "'");
  }
  if (j.is_object() && j.contains("occupancy")) {
    const int k = as_int(j.at("occupancy"), "occupancy mode");
    if (k < 0 || k >= n.value()) throw SchemaError("occupancy mode out of range");
    return {"occupancy_" + std::to_string(k), occupancy_projector(n, k)};
  }
  if (j.is_object() && j.contains("explicit")) {
    const json& e = j.at("explicit");
    const std::string name = "explicit_" + std::to_string(index);
    if (e.is_object() && e.contains("diagonal")) {
      const auto d = as_numbers(e.at("diagonal"), "explicit.diagonal");
      if (static_cast<Eigen::Index>(d.size()) != n.dimension()) {
        throw SchemaError("explicit.diagonal needs 2^modes entries");
      }
      return {name, LinearOperator::diagonal(n, d)};
    }
    if (e.is_object() && e.contains("entries")) {
      std::vector<Triplet> t;
      for (const auto& entry : e.at("entries")) {
        const auto v = as_numbers(entry, "explicit entry");
        if (v.size() != 4) throw SchemaError("explicit entry must be [row, col, re, im]");
        const auto r = static_cast<Eigen::Index>(v[0]);
        const auto c = static_cast<Eigen::Index>(v[1]);
        if (r < 0 || c < 0 || r >= n.dimension() || c >= n.dimension() || double(r) != v[0] ||
            double(c) != v[1]) {
          throw SchemaError("explicit entry index out of range");
        }
        t.emplace_back(r, c, Complex(v[2], v[3]));
      }
      SparseMatrix m(n.dimension(), n.dimension());
      m.setFromTriplets(t.begin(), t.end());
      return {name, LinearOperator(n, std::move(m))};
    }
    throw SchemaError("explicit observable needs 'diagonal' or 'entries'");
  }
  throw SchemaError("observable must be a name or an object");
}

/// {"type": "vacuum"} | {"type": "basis", "subset": [...]} |
/// {"type": "mixture", "weights": {"[0]": 0.5, "[1]": 0.5}}; keys are subset serializations.
inline Eigen::VectorXd initial_populations_from_json(const json& j, ModeCount n) {
  const json& type = require(j, "type");
  if (!type.is_string()) throw SchemaError("initial_state.type must be a string");
  const std::string t = type.get<std::string>();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n.dimension());
  if (t == "vacuum") {
    p[0] = 1.0;
  } else if (t == "basis") {
    p[subset_from_json(require(j, "subset"), n).index()] = 1.0;
  } else if (t == "mixture") {
    const json& weights = require(j, "weights");
    if (!weights.is_object() || weights.empty()) throw SchemaError("mixture weights must be a nonempty object");
    for (const auto& [key, value] : weights.items()) {
      const json parsed = json::parse(key, nullptr, false);
      if (parsed.is_discarded()) throw SchemaError("mixture key '" + key + "' is not a subset array");
      const double w = as_number(value, "mixture weight");
      if (w < 0.0) throw SchemaError("mixture weights must be nonnegative");
      p[subset_from_json(parsed, n).index()] += w;
    }
    if (std::abs(p.sum() - 1.0) > 1e-10) throw SchemaError("mixture weights must sum to 1");
  } else {
    throw SchemaError("unknown initial_state type '" + t + "'");
  }
  return p;
}

inline const std::set<std::string>& known_checks() {
  static const std::set<std::string> names = {"classical", "markov", "subharmonic", "decoherence_free"};
  return names;
}

inline ScenarioConfig scenario_from_json(const json& j) {
  if (!j.is_object()) throw SchemaError("scenario must be a JSON object");
  const ModeCount n = mode_count(require(j, "modes"), "modes");
  TransitionKernel kernel = kernel_from_json(require(j, "kernel"), n);
  HamiltonianTable ham = j.contains("hamiltonian") ? hamiltonian_from_json(j.at("hamiltonian"), n)
                                                   : HamiltonianTable::zero(n);

  std::vector<double> times = as_numbers(require(j, "times"), "times");
  if (times.empty()) throw SchemaError("times must not be empty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0) throw SchemaError("times must be nonnegative");
    if (i > 0 && times[i] < times[i - 1]) throw SchemaError("times must be sorted");
  }

  std::vector<Observable> observables;
  const json& obs = require(j, "observables");
  if (!obs.is_array()) throw SchemaError("observables must be an array");
  for (std::size_t i = 0; i < obs.size(); ++i) observables.push_back(observable_from_json(obs[i], n, i));

  Eigen::VectorXd pops = j.contains("initial_state") ? initial_populations_from_json(j.at("initial_state"), n)
                                                     : Eigen::VectorXd::Unit(n.dimension(), 0);

  std::vector<std::string> checks;
  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) throw SchemaError("checks must be an array");
    for (const auto& c : j.at("checks")) {
      if (!c.is_string() || !known_checks().contains(c.get<std::string>())) {
        throw SchemaError("unknown check " + c.dump());
      }
      checks.push_back(c.get<std::string>());
    }
  }

  ScenarioConfig cfg{std::move(kernel), std::move(ham), std::move(times), std::move(observables), pops,
                     DenseMatrix(pops.cast<Complex>().asDiagonal()), std::move(checks)};
  if (j.contains("tolerances")) cfg.tolerances = tolerances_from_json(j.at("tolerances"), cfg.tolerances);
  if (j.contains("method")) cfg.method = method_from_json(j.at("method"));
  if (j.contains("gillespie")) {
    const json& g = j.at("gillespie");
    if (g.contains("trials")) cfg.gillespie_trials = as_int(g.at("trials"), "gillespie.trials");
    if (g.contains("seed")) cfg.seed = static_cast<std::uint64_t>(as_int(g.at("seed"), "gillespie.seed"));
    if (cfg.gillespie_trials < 1) throw SchemaError("gillespie.trials must be positive");
  }
  return cfg;
}

} // namespace io

inline ScenarioArtifacts run_scenario(const ScenarioConfig& cfg) {
  using nlohmann::json;
  const SemigroupModel model = build_model(cfg.kernel, cfg.hamiltonian, cfg.tolerances);
  const ModeCount n = model.modes();
  const bool classical = std::find(cfg.checks.begin(), cfg.checks.end(), "classical") != cfg.checks.end();

  ScenarioArtifacts out;
  std::vector<IdentityReport> reports;

  std::ostringstream ts;
  ts << 't';
  for (const auto& o : cfg.observables) ts << ',' << o.name;
  if (classical) ts << ",tv_classical";
  ts << '\n';

  std::ostringstream cl;
  if (classical) cl << "t,configuration,quantum,classical_ode,gillespie\n";

  const Distribution p0(n, cfg.initial_populations);
  const RateMatrix q = classical ? classical_generator(cfg.kernel) : RateMatrix{n, {}};
  DensityMatrix rho = DensityMatrix::unchecked(n, cfg.initial_state);
  double now = 0.0;
  for (double t : cfg.times) {
    rho = evolve_schrodinger(model, rho, t - now, cfg.method);
    now = t;
    ts << io::format_double(t);
    for (const auto& o : cfg.observables) ts << ',' << io::format_double(rho.expectation(o.op.dense()).real());
    if (classical) {
      const Distribution pc = evolve_classical(q, p0, t);
      const Eigen::VectorXd diag = rho.matrix().diagonal().real();
      const double tv = total_variation(diag, pc.values());
      ts << ',' << io::format_double(tv);
      reports.push_back(make_report("classical/diagonal_tv", n.value(), {{"t", t}}, tv, cfg.tolerances.diagonal_tv));

      // Gillespie sampling needs a pure initial configuration; mixtures are sampled per component.
      Eigen::VectorXd gs = Eigen::VectorXd::Zero(n.dimension());
      for (SubsetIndex s : enumerate_basis(n)) {
        if (p0[s] <= 0.0) continue;
        gs += p0[s] * gillespie_sample(cfg.kernel, s, t, cfg.gillespie_trials, cfg.seed + s.bits).values();
      }
      const double binomial = 1.0 / std::sqrt(static_cast<double>(cfg.gillespie_trials));
      reports.push_back(make_report("classical/gillespie_tv", n.value(), {{"t", t}},
                                    (gs - pc.values()).cwiseAbs().maxCoeff(),
                                    std::max(cfg.tolerances.gillespie, 5.0 * binomial)));
      for (SubsetIndex s : enumerate_basis(n)) {
        cl << io::format_double(t) << ",\"" << io::subset_to_string(s) << "\"," << io::format_double(diag[s.index()])
           << ',' << io::format_double(pc[s]) << ',' << io::format_double(gs[s.index()]) << '\n';
      }
    }
    ts << '\n';
  }

  for (const auto& check : cfg.checks) {
    if (check == "markov") {
      auto r = verify_markov_properties(model, cfg.times, cfg.seed, cfg.method, cfg.tolerances);
      reports.insert(reports.end(), r.begin(), r.end());
    } else if (check == "subharmonic") {
      if (!cfg.kernel.regular()) throw SchemaError("subharmonic check requires a regular kernel");
      for (double t : cfg.times) reports.push_back(verify_subharmonic_vacuum(model, t, cfg.method, cfg.tolerances));
    } else if (check == "decoherence_free") {
      for (double t : cfg.times) {
        const auto d = verify_decoherence_free(model, number_operator(n), t, cfg.method, cfg.tolerances);
        reports.push_back(d.surrogate);
        reports.insert(reports.end(), d.conclusions.begin(), d.conclusions.end());
      }
    }
  }

  out.pass = all_pass(reports);
  out.report = json{
      {"modes", n.value()},
      {"kernel",
       {{"table", io::kernel_to_json(cfg.kernel).at("table")},
        {"alpha", cfg.kernel.alpha()},
        {"beta", cfg.kernel.beta()},
        {"diag_sup", cfg.kernel.diag_sup()},
        {"regular", cfg.kernel.regular()}}},
      {"weighted_number_norm", norm_of_weighted_number(cfg.kernel)},
      {"admissibility_residual", model.admissibility_residual()},
      {"jump_sum_residual", model.jump_sum_residual()},
      {"jump_count", model.jumps().size()},
      {"times", cfg.times},
      {"checks", reports},
      {"pass", out.pass},
  };
  out.timeseries_csv = ts.str();
  out.classical_csv = cl.str();
  return out;
}

} // namespace qbn
