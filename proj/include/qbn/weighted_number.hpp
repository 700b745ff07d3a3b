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

// Transition kernels, the eigenvalue function theta_w, the 2D-weighted number
// operator S_w (by explicit operator composition and by its spectral form),
// 1D-weighted number operators N_u and the number operator N.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qbn/errors.hpp"
#include "qbn/fock.hpp"

namespace qbn {

/// Bounded nonnegative weight u(k) per mode.
class WeightFunction {
public:
  WeightFunction(ModeCount n, std::vector<double> u) : n_(n), u_(std::move(u)) {
    if (static_cast<int>(u_.size()) != n.value()) {
      throw ShapeError("weight function needs " + std::to_string(n.value()) + " entries, got " +
                       std::to_string(u_.size()));
    }
    for (double x : u_) {
      if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("weight entries must be finite and nonnegative");
      }
    }
  }

  static WeightFunction constant(ModeCount n, double c) {
    return {n, std::vector<double>(static_cast<std::size_t>(n.value()), c)};
  }

  ModeCount modes() const { return n_; }
  double operator[](int k) const { return u_[static_cast<std::size_t>(k)]; }
  const std::vector<double>& values() const { return u_; }

private:
  ModeCount n_;
  std::vector<double> u_;
};

/// Nonnegative rate table; weight(j, k) is the rate for a jump k -> j.
class TransitionKernel {
public:
  TransitionKernel(ModeCount n, Eigen::MatrixXd table) : n_(n), w_(std::move(table)) {
    if (w_.rows() != n.value() || w_.cols() != n.value()) {
      throw ShapeError("kernel table must be " + std::to_string(n.value()) + "x" +
                       std::to_string(n.value()));
    }
    if (!w_.allFinite() || (w_.array() < 0.0).any()) {
      throw DomainError("kernel entries must be finite and nonnegative");
    }
    alpha_ = w_.colwise().sum().maxCoeff();
    beta_ = w_.diagonal().minCoeff();
    diag_sup_ = w_.diagonal().maxCoeff();
  }

  /// w_0: identity table.
  static TransitionKernel canonical(ModeCount n) {
    return {n, Eigen::MatrixXd::Identity(n.value(), n.value())};
  }

  static TransitionKernel zero(ModeCount n) {
    return {n, Eigen::MatrixXd::Zero(n.value(), n.value())};
  }

  /// Rate `a` for k -> k+1, `b` for k -> k-1 and `d` on the diagonal.
  static TransitionKernel nearest_neighbor(ModeCount n, double a, double b, double d) {
    const int m = n.value();
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, m);
    for (int k = 0; k < m; ++k) {
      w(k, k) = d;
      if (k + 1 < m) w(k + 1, k) = a;
      if (k - 1 >= 0) w(k - 1, k) = b;
    }
    return {n, std::move(w)};
  }

  ModeCount modes() const { return n_; }
  double weight(int j, int k) const { return w_(j, k); }
  const Eigen::MatrixXd& table() const { return w_; }

  /// Largest column sum.
  double alpha() const { return alpha_; }
  /// Smallest diagonal entry; positive iff the kernel is regular.
  double beta() const { return beta_; }
  /// Largest diagonal entry.
  double diag_sup() const { return diag_sup_; }
  bool regular() const { return beta_ > 0.0; }

  /// u(j) = w(j, k): weights flowing into the sites from column k.
  WeightFunction column(int k) const {
    check_mode(n_, k);
    return {n_, std::vector<double>(w_.col(k).data(), w_.col(k).data() + w_.rows())};
  }

  /// u(k) = w(j, k) for fixed j.
  WeightFunction row(int j) const {
    check_mode(n_, j);
    std::vector<double> u(static_cast<std::size_t>(n_.value()));
    for (int k = 0; k < n_.value(); ++k) u[k] = w_(j, k);
    return {n_, std::move(u)};
  }

private:
  ModeCount n_;
  Eigen::MatrixXd w_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double diag_sup_ = 0.0;
};

/// theta_w restricted to j, k < m. m = n gives the full value.
inline double theta_truncated(const TransitionKernel& w, SubsetIndex s, int m) {
  check_subset(w.modes(), s);
  m = std::clamp(m, 0, w.modes().value());
  double diag = 0.0;
  double flow = 0.0;
  for (int j = 0; j < m; ++j) {
    if (s.contains(j)) {
      diag += w.weight(j, j);
      continue;
    }
    for (int k = 0; k < m; ++k) {
      if (s.contains(k)) flow += w.weight(j, k);
    }
  }
  return diag + flow;
}

/// Eigenvalue of S_w on Z_s: retained diagonal weights of occupied sites plus
/// the inflow weights from occupied sites to empty ones.
inline double theta(const TransitionKernel& w, SubsetIndex s) {
  return theta_truncated(w, s, w.modes().value());
}

/// theta for every basis element, in bitmask order.
class ThetaTable {
public:
  explicit ThetaTable(const TransitionKernel& w) : values_(w.modes().dimension()) {
    for (SubsetIndex s : enumerate_basis(w.modes())) values_[s.index()] = theta(w, s);
  }

  double operator[](SubsetIndex s) const { return values_[s.index()]; }
  const Eigen::VectorXd& values() const { return values_; }
  double max() const { return values_.maxCoeff(); }

private:
  Eigen::VectorXd values_;
};

/// S_w = sum_{j,k} w(j,k) C_k A_j C_j A_k assembled term by term from the
/// annihilators A and creators C.
inline LinearOperator weighted_number_direct(const TransitionKernel& w) {
  const ModeCount n = w.modes();
  std::vector<LinearOperator> a, c;
  for (int k = 0; k < n.value(); ++k) {
    a.push_back(annihilator(n, k));
    c.push_back(creator(n, k));
  }
  LinearOperator sum = LinearOperator::zero(n);
  for (int j = 0; j < n.value(); ++j) {
    for (int k = 0; k < n.value(); ++k) {
      sum += w.weight(j, k) * (c[k] * a[j] * c[j] * a[k]);
    }
  }
  return sum;
}

inline LinearOperator weighted_number_spectral(const TransitionKernel& w) {
  return LinearOperator::diagonal(w.modes(), ThetaTable(w).values());
}

/// Sum of u(k) over occupied sites.
inline double occupancy_weight(const WeightFunction& u, SubsetIndex s) {
  check_subset(u.modes(), s);
  double sum = 0.0;
  for (int k : s.modes()) sum += u[k];
  return sum;
}

inline LinearOperator one_d_number_operator(const WeightFunction& u) {
  Eigen::VectorXd d(u.modes().dimension());
  for (SubsetIndex s : enumerate_basis(u.modes())) d[s.index()] = occupancy_weight(u, s);
  return LinearOperator::diagonal(u.modes(), d);
}

/// Diagonal kernel w(j,j) = u(j), for which S_w coincides with N_u.
inline TransitionKernel embed_1d_kernel(const WeightFunction& u) {
  const auto& v = u.values();
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  return {u.modes(), Eigen::MatrixXd(d.asDiagonal())};
}

inline LinearOperator number_operator(ModeCount n) {
  Eigen::VectorXd d(n.dimension());
  for (SubsetIndex s : enumerate_basis(n)) d[s.index()] = s.cardinality();
  return LinearOperator::diagonal(n, d);
}

/// ||S_w|| as the largest eigenvalue theta_w(s) over the truncated basis.
inline double norm_of_weighted_number(const TransitionKernel& w) { return ThetaTable(w).max(); }

} // namespace qbn
