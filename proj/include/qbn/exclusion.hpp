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

// Classical exclusion process on particle configurations: a particle at
// site k hops to the empty site j at rate w(j,k). Used as an independent
// oracle for the diagonal of the quantum evolution.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "qbn/errors.hpp"
#include "qbn/fock.hpp"
#include "qbn/report.hpp"
#include "qbn/semigroup.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

inline constexpr int kMaxClassicalModes = 10;

/// Forward generator of the configuration chain: column s holds the outflow of s.
struct RateMatrix {
  ModeCount n;
  Eigen::SparseMatrix<double> q;
};

/// Probability vector over configurations in bitmask order.
class Distribution {
public:
  Distribution(ModeCount n, Eigen::VectorXd p) : n_(n), p_(std::move(p)) {
    if (p_.size() != n.dimension()) throw ShapeError("distribution length does not match 2^n");
    for (Eigen::Index i = 0; i < p_.size(); ++i) {
      if (!std::isfinite(p_[i]) || p_[i] < -1e-12) throw DomainError("negative probability");
      if (p_[i] < 0.0) p_[i] = 0.0;
    }
    if (std::abs(p_.sum() - 1.0) > 1e-10) throw DomainError("probabilities do not sum to 1");
  }

  static Distribution point_mass(ModeCount n, SubsetIndex s) {
    check_subset(n, s);
    Eigen::VectorXd p = Eigen::VectorXd::Zero(n.dimension());
    p[s.index()] = 1.0;
    return {n, std::move(p)};
  }

  ModeCount modes() const { return n_; }
  double operator[](SubsetIndex s) const { return p_[s.index()]; }
  const Eigen::VectorXd& values() const { return p_; }

private:
  ModeCount n_;
  Eigen::VectorXd p_;
};

inline double total_variation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return 0.5 * (a - b).cwiseAbs().sum();
}

/// Diagonal kernel entries only dephase and contribute no transitions.
inline RateMatrix classical_generator(const TransitionKernel& w) {
  const ModeCount n = w.modes();
  if (n.value() > kMaxClassicalModes) {
    throw CapacityError("classical chain limited to " + std::to_string(kMaxClassicalModes) + " modes");
  }
  std::vector<Eigen::Triplet<double>> t;
  for (SubsetIndex s : enumerate_basis(n)) {
    double out = 0.0;
    for (int k : s.modes()) {
      for (int j = 0; j < n.value(); ++j) {
        if (j == k || s.contains(j) || w.weight(j, k) <= 0.0) continue;
        t.emplace_back(s.without(k).with(j).index(), s.index(), w.weight(j, k));
        out += w.weight(j, k);
      }
    }
    if (out > 0.0) t.emplace_back(s.index(), s.index(), -out);
  }
  Eigen::SparseMatrix<double> q(n.dimension(), n.dimension());
  q.setFromTriplets(t.begin(), t.end());
  return {n, std::move(q)};
}

/// p_t = exp(tQ) p_0 via a dense Pade matrix exponential.
inline Distribution evolve_classical(const RateMatrix& q, const Distribution& p0, double t) {
  if (t < 0.0) throw DomainError("negative evolution time");
  if (q.n != p0.modes()) throw ShapeError("rate matrix and distribution mode counts differ");
  if (t == 0.0) return p0;
  const Eigen::MatrixXd tq = t * Eigen::MatrixXd(q.q);
  const Eigen::MatrixXd prop = tq.exp();
  Eigen::VectorXd p = prop * p0.values();
  p /= p.sum();
  return {p0.modes(), std::move(p)};
}

struct TrajectoryEvent {
  double time = 0.0;
  SubsetIndex state;
};

/// One exact stochastic trajectory up to `t`; the first event is the start state.
template <typename Rng>
std::vector<TrajectoryEvent> gillespie_trajectory(const TransitionKernel& w, SubsetIndex start, double t,
                                                  Rng& rng) {
  check_subset(w.modes(), start);
  if (t < 0.0) throw DomainError("negative evolution time");
  const int n = w.modes().value();
  std::vector<TrajectoryEvent> path{{0.0, start}};
  std::vector<std::pair<SubsetIndex, double>> moves;
  SubsetIndex s = start;
  double now = 0.0;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (;;) {
    moves.clear();
    double total = 0.0;
    for (int k : s.modes()) {
      for (int j = 0; j < n; ++j) {
        if (j == k || s.contains(j) || w.weight(j, k) <= 0.0) continue;
        moves.emplace_back(s.without(k).with(j), w.weight(j, k));
        total += w.weight(j, k);
      }
    }
    if (total <= 0.0) break;
    now += std::exponential_distribution<double>(total)(rng);
    if (now > t) break;
    double pick = unif(rng) * total;
    std::size_t i = 0;
    for (; i + 1 < moves.size(); ++i) {
      pick -= moves[i].second;
      if (pick < 0.0) break;
    }
    s = moves[i].first;
    path.push_back({now, s});
  }
  return path;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the substream for one trial, so results do not depend on scheduling.
inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) {
  return splitmix64(seed ^ splitmix64(trial));
}

inline Distribution gillespie_sample(const TransitionKernel& w, SubsetIndex start, double t,
                                     std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("trial count must be at least 1");
  const ModeCount n = w.modes();
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(n.dimension());
  for (std::int64_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng(trial_seed(seed, static_cast<std::uint64_t>(i)));
    counts[gillespie_trajectory(w, start, t, rng).back().state.index()] += 1.0;
  }
  return {n, counts / static_cast<double>(trials)};
}

/// Evolves diag(p0) under the quantum semigroup and p0 under the classical
/// chain; reports the total-variation gap between the diagonal and p_t and the
/// largest off-diagonal magnitude of rho_t.
inline std::vector<IdentityReport> verify_diagonal_correspondence(const SemigroupModel& model,
                                                                  const Distribution& p0, double t,
                                                                  const EvolutionParams& params = {},
                                                                  const Tolerances& tol = {}) {
  const ModeCount n = model.modes();
  if (p0.modes() != n) throw ShapeError("distribution and model mode counts differ");
  const DensityMatrix rho =
      evolve_schrodinger(model, DensityMatrix::diagonal(n, p0.values()), t, params);
  const Distribution pt = evolve_classical(classical_generator(model.kernel()), p0, t);
  const Eigen::VectorXd diag = rho.matrix().diagonal().real();
  DenseMatrix off = rho.matrix();
  off.diagonal().setZero();
  return {
      make_report("classical/diagonal_tv", n.value(), {{"t", t}}, total_variation(diag, pt.values()),
                  tol.diagonal_tv),
      make_report("classical/stays_diagonal", n.value(), {{"t", t}}, max_abs_entry(off), tol.off_diagonal),
  };
}

} // namespace qbn
