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

// Monte Carlo check tying the subset basis to the underlying Bernoulli
// process: Z_k takes theta_k with probability p_k and -1/theta_k otherwise,
// Z_s is the product over k in s, and the Gram matrix E[Z_s Z_t] is the identity.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qbn/errors.hpp"
#include "qbn/fock.hpp"

namespace qbn {

inline constexpr int kMaxGramModes = 10;

class BernoulliProcessSpec {
public:
  BernoulliProcessSpec(ModeCount n, std::vector<double> p) : n_(n), p_(std::move(p)) {
    if (static_cast<int>(p_.size()) != n.value()) {
      throw ShapeError("expected " + std::to_string(n.value()) + " success probabilities");
    }
    for (double pk : p_) {
      if (!(pk > 0.0 && pk < 1.0)) {
        throw DomainError("success probability must lie in (0,1), got " + std::to_string(pk));
      }
    }
  }

  ModeCount modes() const { return n_; }
  double p(int k) const { return p_[static_cast<std::size_t>(k)]; }
  double q(int k) const { return 1.0 - p(k); }
  double theta(int k) const { return std::sqrt(q(k) / p(k)); }

private:
  ModeCount n_;
  std::vector<double> p_;
};

/// Empirical Gram matrix G[s,t] = mean of Z_s Z_t over `samples` draws.
inline Eigen::MatrixXd sample_bernoulli_gram(const BernoulliProcessSpec& spec, std::int64_t samples,
                                             std::uint64_t seed) {
  if (samples < 1) throw DomainError("sample count must be at least 1");
  const int n = spec.modes().value();
  if (n > kMaxGramModes) {
    throw CapacityError("Gram sampling limited to " + std::to_string(kMaxGramModes) + " modes");
  }
  const Eigen::Index dim = spec.modes().dimension();

  std::mt19937_64 rng(seed);
  std::vector<std::bernoulli_distribution> coin;
  std::vector<double> up, down;
  for (int k = 0; k < n; ++k) {
    coin.emplace_back(spec.p(k));
    up.push_back(spec.theta(k));
    down.push_back(-1.0 / spec.theta(k));
  }

  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
  Eigen::VectorXd z(dim);
  std::vector<double> zk(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < samples; ++i) {
    for (int k = 0; k < n; ++k) zk[k] = coin[k](rng) ? up[k] : down[k];
    z[0] = 1.0;
    for (Eigen::Index s = 1; s < dim; ++s) {
      // peel the lowest mode: Z_s = Z_{s minus low} * Z_low
      const auto bits = static_cast<std::uint32_t>(s);
      const int low = std::countr_zero(bits);
      z[s] = z[static_cast<Eigen::Index>(bits & (bits - 1))] * zk[low];
    }
    acc.selfadjointView<Eigen::Lower>().rankUpdate(z);
  }
  Eigen::MatrixXd gram = acc.selfadjointView<Eigen::Lower>();
  return gram / static_cast<double>(samples);
}

} // namespace qbn
