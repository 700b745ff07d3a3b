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

// Verification suite: every identity and property check over seeded random
// kernels, dispatched to a worker pool and reported in name order.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qbn/algebra_verify.hpp"
#include "qbn/exclusion.hpp"
#include "qbn/fock.hpp"
#include "qbn/io.hpp"
#include "qbn/report.hpp"
#include "qbn/semigroup.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

struct SuiteConfig {
  std::uint64_t seed = 20260101;
  std::vector<int> modes = {2, 3, 4, 5};
  int kernels_per_mode = 20;
  /// Largest mode count for the evolution-based families (markov, decoherence_free, classical).
  int max_evolution_modes = 4;
  /// Empty runs every family.
  std::string only;
  /// Swap in the non-holding annihilator-commutator coefficient; the suite must then fail.
  bool negative_control = false;
  double tolerance_scale = 1.0;
  unsigned workers = 0;  // 0 = hardware concurrency
};

struct CheckResult {
  std::string name;
  std::string family;
  std::vector<IdentityReport> reports;
  double seconds = 0.0;

  bool pass() const { return !reports.empty() && all_pass(reports); }
};

struct SuiteResult {
  std::vector<CheckResult> checks;

  int passed() const {
    return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.pass(); }));
  }
  int failed() const { return static_cast<int>(checks.size()) - passed(); }
  int exit_code() const { return failed() == 0 ? 0 : 1; }
};

inline const std::vector<std::string>& suite_families() {
  static const std::vector<std::string> f = {"car",    "commutators_1d", "commutators_2d", "exchange",
                                             "spectral", "norm",         "markov",         "subharmonic",
                                             "decoherence_free", "classical"};
  return f;
}

/// Stable 64-bit FNV-1a, used to derive per-check seeds from names.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Uniform [0,1) entries with roughly a third set to zero.
inline TransitionKernel random_kernel(ModeCount n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::MatrixXd w(n.value(), n.value());
  for (int c = 0; c < n.value(); ++c) {
    for (int r = 0; r < n.value(); ++r) {
      const double keep = unif(rng);
      const double value = unif(rng);
      w(r, c) = keep < 1.0 / 3.0 ? 0.0 : value;
    }
  }
  return {n, std::move(w)};
}

inline HamiltonianTable random_hamiltonian(ModeCount n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Eigen::VectorXd f(n.dimension());
  for (Eigen::Index i = 0; i < f.size(); ++i) f[i] = unif(rng);
  f[0] = 0.0;
  return {n, std::move(f)};
}

namespace detail {

struct SuiteTask {
  std::string name;
  std::string family;
  std::function<std::vector<IdentityReport>()> run;
};

inline std::string pad(int i) {
  std::string s = std::to_string(i);
  return std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
}

inline std::vector<SuiteTask> build_tasks(const SuiteConfig& cfg, const Tolerances& tol) {
  std::vector<SuiteTask> tasks;
  auto add = [&](std::string family, std::string name, std::function<std::vector<IdentityReport>()> fn) {
    if (!cfg.only.empty() && cfg.only != family) return;
    tasks.push_back({family + "/" + name, std::move(family), std::move(fn)});
  };
  auto rng_for = [&](const std::string& name) { return std::mt19937_64(cfg.seed ^ fnv1a(name)); };
  const std::vector<double> markov_times = {0.1, 0.5, 1.0};
  const CorrectionForm form = cfg.negative_control ? CorrectionForm::doubled : CorrectionForm::standard;

  for (int m : cfg.modes) {
    const ModeCount n(m);
    const std::string nn = "n=" + std::to_string(m);
    add("car", nn, [n, tol] { return verify_car(n, tol); });

    for (int i = 0; i < cfg.kernels_per_mode; ++i) {
      const std::string tag = nn + "/kernel=" + pad(i);
      auto rng = rng_for(tag);
      const TransitionKernel w = random_kernel(n, rng);
      std::uniform_real_distribution<double> unif(0.0, 2.0);
      std::vector<double> u(static_cast<std::size_t>(m));
      for (auto& x : u) x = unif(rng);
      const WeightFunction weight(n, u);

      add("commutators_1d", tag, [weight, tol] { return verify_weighted_commutators_1d(weight, tol); });
      add("commutators_2d", tag, [w, tol, form] { return verify_weighted_commutators_2d(w, tol, form); });
      add("exchange", tag, [w, tol] { return verify_exchange_commutation(w, tol); });
      add("spectral", tag, [w, tol] {
        const double r = residual_norm(weighted_number_direct(w), weighted_number_spectral(w));
        return std::vector<IdentityReport>{
            make_report("spectral/direct_vs_spectral", w.modes().value(), {}, r, tol.weighted)};
      });
      add("norm", tag, [w, tol] {
        const double r = std::abs(spectral_norm(weighted_number_direct(w)) - norm_of_weighted_number(w));
        return std::vector<IdentityReport>{make_report("norm/spectral_norm_is_max_theta", w.modes().value(), {}, r,
                                                       tol.weighted)};
      });
    }

    if (m > cfg.max_evolution_modes) continue;

    // Evolution families: canonical and zero kernels plus two seeded random models.
    std::vector<std::pair<std::string, std::function<SemigroupModel()>>> models;
    models.emplace_back(nn + "/canonical", [n] { return build_model(TransitionKernel::canonical(n), HamiltonianTable::zero(n)); });
    models.emplace_back(nn + "/zero_kernel", [n, seed = cfg.seed] {
      std::mt19937_64 rng(seed ^ fnv1a("zero_kernel"));
      return build_model(TransitionKernel::zero(n), random_hamiltonian(n, rng));
    });
    for (int i = 0; i < 2; ++i) {
      const std::string tag = nn + "/model=" + pad(i);
      models.emplace_back(tag, [n, r0 = rng_for(tag)] {
        auto r = r0;
        const TransitionKernel w = random_kernel(n, r);
        return build_model(w, random_hamiltonian(n, r));
      });
    }

    for (const auto& [tag, make] : models) {
      const std::uint64_t seed = cfg.seed ^ fnv1a(tag);
      add("markov", tag, [make, markov_times, seed, tol] {
        return verify_markov_properties(make(), markov_times, seed, {}, tol);
      });
      add("decoherence_free", tag, [make, tol] {
        const SemigroupModel model = make();
        std::vector<IdentityReport> out;
        for (double t : {0.5, 1.0}) {
          const auto d = verify_decoherence_free(model, number_operator(model.modes()), t, {}, tol);
          out.push_back(d.surrogate);
          out.insert(out.end(), d.conclusions.begin(), d.conclusions.end());
        }
        return out;
      });
      add("classical", tag, [make, seed, tol] {
        const SemigroupModel model = make();
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        Eigen::VectorXd p(model.modes().dimension());
        for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = unif(rng);
        const Distribution p0(model.modes(), p / p.sum());
        std::vector<IdentityReport> out;
        for (double t : {0.5, 1.0}) {
          auto r = verify_diagonal_correspondence(model, p0, t, {}, tol);
          out.insert(out.end(), r.begin(), r.end());
        }
        return out;
      });
    }

    if (m <= 3) {
      for (const auto& [label, kernel] : {std::pair{std::string("canonical"), TransitionKernel::canonical(n)},
                                          std::pair{std::string("nearest_neighbor"), TransitionKernel::nearest_neighbor(n, 1, 1, 1)}}) {
        add("subharmonic", nn + "/" + label, [kernel, tol] {
          const SemigroupModel model = build_model(kernel, HamiltonianTable::zero(kernel.modes()));
          std::vector<IdentityReport> out;
          for (double t : {0.5, 1.0, 2.0}) out.push_back(verify_subharmonic_vacuum(model, t, {}, tol));
          return out;
        });
      }
    }
  }

  // Two-state chain: one particle hopping 0 -> 1 at unit rate, exact p({1}) = 1 - e^{-t}.
  add("classical", "two_state", [tol, seed = cfg.seed] {
    const ModeCount n(2);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
    w(1, 0) = 1.0;
    const TransitionKernel kernel(n, w);
    const SemigroupModel model = build_model(kernel, HamiltonianTable::zero(n));
    const SubsetIndex start(1), moved(2);
    auto out = verify_diagonal_correspondence(model, Distribution::point_mass(n, start), 1.0, {}, tol);
    const double exact = 1.0 - std::exp(-1.0);
    const DensityMatrix rho = evolve_schrodinger(model, DensityMatrix::basis(n, start), 1.0);
    out.push_back(make_report("classical/two_state_closed_form", 2, {{"t", 1.0}},
                              std::abs(rho.matrix()(moved.index(), moved.index()).real() - exact), tol.diagonal_tv));
    const Distribution g = gillespie_sample(kernel, start, 1.0, 100000, seed);
    out.push_back(make_report("classical/two_state_gillespie", 2, {{"t", 1.0}, {"trials", 100000}},
                              std::abs(g[moved] - exact), tol.gillespie));
    return out;
  });

  return tasks;
}

} // namespace detail

inline SuiteResult run_verification_suite(const SuiteConfig& cfg) {
  const Tolerances tol = Tolerances{}.scaled(cfg.tolerance_scale);
  std::vector<detail::SuiteTask> tasks = detail::build_tasks(cfg, tol);
  std::vector<CheckResult> results(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const auto start = std::chrono::steady_clock::now();
      CheckResult r{tasks[i].name, tasks[i].family, {}, 0.0};
      try {
        r.reports = tasks[i].run();
      } catch (const std::exception& e) {
        r.reports = {make_report(std::string("error: ") + e.what(), 0, {}, INFINITY, 0.0)};
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      results[i] = std::move(r);
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned count = std::min<unsigned>(cfg.workers == 0 ? hw : cfg.workers,
                                            static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned i = 1; i < count; ++i) pool.emplace_back(worker);
    worker();
  }
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return {std::move(results)};
}

/// Deterministic summary: no timings, checks ordered by name.
inline nlohmann::json suite_to_json(const SuiteResult& r, const SuiteConfig& cfg) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"family", c.family},
                      {"pass", c.pass()},
                      {"max_residual", max_residual(c.reports)},
                      {"reports", c.reports}});
  }
  return {{"seed", cfg.seed},
          {"modes", cfg.modes},
          {"kernels_per_mode", cfg.kernels_per_mode},
          {"negative_control", cfg.negative_control},
          {"tolerance_scale", cfg.tolerance_scale},
          {"only", cfg.only},
          {"checks", std::move(checks)},
          {"passed", r.passed()},
          {"failed", r.failed()}};
}

inline nlohmann::json suite_timing_to_json(const SuiteResult& r) {
  nlohmann::json t = nlohmann::json::object();
  for (const auto& c : r.checks) t[c.name] = c.seconds;
  return t;
}

} // namespace qbn
