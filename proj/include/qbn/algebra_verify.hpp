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

// Residual checks for the operator identities of the Bernoulli noise algebra:
// equal-time CAR, 1D and 2D weighted-number commutators and the exchange
// commutation of N and S_w with hopping and occupancy operators.

#include <string>
#include <vector>

#include "qbn/fock.hpp"
#include "qbn/report.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

/// Coefficient of the bare annihilator term in the S_w / annihilator commutator.
enum class CorrectionForm {
  standard,       // -[2 w(m,m) + sum_j w(j,m)]
  doubled,        // -2 [w(m,m) + sum_j w(j,m)], does not hold; negative control only
};

inline std::vector<IdentityReport> verify_car(ModeCount n, const Tolerances& tol = {}) {
  std::vector<IdentityReport> out;
  const int m = n.value();
  std::vector<LinearOperator> a, c;
  for (int k = 0; k < m; ++k) {
    a.push_back(annihilator(n, k));
    c.push_back(creator(n, k));
  }
  for (int k = 0; k < m; ++k) {
    for (int l = 0; l < m; ++l) {
      if (k == l) continue;
      const nlohmann::json p = {{"k", k}, {"l", l}};
      out.push_back(make_report("car/annihilators_commute", m, p,
                                residual_norm(a[k] * a[l], a[l] * a[k]), tol.exact));
      out.push_back(make_report("car/creators_commute", m, p,
                                residual_norm(c[k] * c[l], c[l] * c[k]), tol.exact));
      out.push_back(make_report("car/mixed_commute", m, p,
                                residual_norm(c[k] * a[l], a[l] * c[k]), tol.exact));
    }
  }
  const LinearOperator id = LinearOperator::identity(n);
  for (int k = 0; k < m; ++k) {
    const nlohmann::json p = {{"k", k}};
    out.push_back(make_report("car/annihilator_nilpotent", m, p, residual_norm(a[k] * a[k]), tol.exact));
    out.push_back(make_report("car/creator_nilpotent", m, p, residual_norm(c[k] * c[k]), tol.exact));
    out.push_back(make_report("car/anticommutator_identity", m, p,
                              residual_norm(anticommutator(a[k], c[k]), id), tol.exact));
  }
  return out;
}

/// N_u A_m = A_m N_u - u(m) A_m and N_u C_m = C_m N_u + u(m) C_m for every mode m.
inline std::vector<IdentityReport> verify_weighted_commutators_1d(const WeightFunction& u,
                                                                  const Tolerances& tol = {}) {
  const ModeCount n = u.modes();
  const LinearOperator nu = one_d_number_operator(u);
  std::vector<IdentityReport> out;
  for (int m = 0; m < n.value(); ++m) {
    const LinearOperator a = annihilator(n, m);
    const LinearOperator c = creator(n, m);
    const nlohmann::json p = {{"mode", m}};
    out.push_back(make_report("commutator_1d/annihilator", n.value(), p,
                              residual_norm(nu * a, a * nu - u[m] * a), tol.weighted));
    out.push_back(make_report("commutator_1d/creator", n.value(), p,
                              residual_norm(nu * c, c * nu + u[m] * c), tol.weighted));
  }
  return out;
}

/// Right-hand side of the S_w / annihilator relation at mode m, built from the
/// given correction operators.
inline LinearOperator cr_a_rhs(const TransitionKernel& w, const LinearOperator& sw, int m,
                               CorrectionForm form = CorrectionForm::standard) {
  const ModeCount n = w.modes();
  const LinearOperator a = annihilator(n, m);
  const LinearOperator n_col = one_d_number_operator(w.column(m));
  const LinearOperator n_row = one_d_number_operator(w.row(m));
  const double inflow = w.table().col(m).sum();
  const double coeff = form == CorrectionForm::standard ? 2.0 * w.weight(m, m) + inflow
                                                       : 2.0 * (w.weight(m, m) + inflow);
  return a * sw + a * n_col + a * n_row - coeff * a;
}

inline LinearOperator cr_c_rhs(const TransitionKernel& w, const LinearOperator& sw, int m) {
  const ModeCount n = w.modes();
  const LinearOperator c = creator(n, m);
  const LinearOperator n_col = one_d_number_operator(w.column(m));
  const LinearOperator n_row = one_d_number_operator(w.row(m));
  const double inflow = w.table().col(m).sum();
  return c * sw - c * n_col - c * n_row + inflow * c;
}

inline std::vector<IdentityReport> verify_weighted_commutators_2d(
    const TransitionKernel& w, const Tolerances& tol = {},
    CorrectionForm form = CorrectionForm::standard) {
  const ModeCount n = w.modes();
  const LinearOperator sw = weighted_number_direct(w);
  const std::string suffix = form == CorrectionForm::standard ? "" : "/doubled";
  std::vector<IdentityReport> out;
  for (int m = 0; m < n.value(); ++m) {
    const LinearOperator a = annihilator(n, m);
    const LinearOperator c = creator(n, m);
    const nlohmann::json p = {{"mode", m}};
    out.push_back(make_report("commutator_2d/annihilator" + suffix, n.value(), p,
                              residual_norm(sw * a, cr_a_rhs(w, sw, m, form)), tol.weighted));
    out.push_back(make_report("commutator_2d/creator", n.value(), p,
                              residual_norm(sw * c, cr_c_rhs(w, sw, m)), tol.weighted));
  }
  return out;
}

/// Negative control: S_w built from `perturbed`, correction terms from `w`.
/// Reports the largest residual over all modes; a working checker yields a
/// residual of the order of the perturbation.
inline IdentityReport verify_cr_a_mismatched(const TransitionKernel& w,
                                             const TransitionKernel& perturbed,
                                             const Tolerances& tol = {}) {
  const ModeCount n = w.modes();
  const LinearOperator sw_pert = weighted_number_direct(perturbed);
  double r = 0.0;
  for (int m = 0; m < n.value(); ++m) {
    r = std::max(r, residual_norm(sw_pert * annihilator(n, m), cr_a_rhs(w, sw_pert, m)));
  }
  return make_report("commutator_2d/annihilator/mismatched_kernel", n.value(), nlohmann::json::object(),
                     r, tol.weighted);
}

/// [N, C_j A_k] = 0 for all (j,k) and [S_w, C_m A_m] = 0 for all m.
inline std::vector<IdentityReport> verify_exchange_commutation(const TransitionKernel& w,
                                                               const Tolerances& tol = {}) {
  const ModeCount n = w.modes();
  const LinearOperator num = number_operator(n);
  const LinearOperator sw = weighted_number_direct(w);
  std::vector<IdentityReport> out;
  for (int j = 0; j < n.value(); ++j) {
    const LinearOperator c = creator(n, j);
    for (int k = 0; k < n.value(); ++k) {
      const LinearOperator hop = c * annihilator(n, k);
      out.push_back(make_report("exchange/number_hopping", n.value(), {{"j", j}, {"k", k}},
                                residual_norm(commutator(num, hop)), tol.exact));
    }
  }
  for (int m = 0; m < n.value(); ++m) {
    out.push_back(make_report("exchange/weighted_occupancy", n.value(), {{"mode", m}},
                              residual_norm(commutator(sw, creator(n, m) * annihilator(n, m))),
                                          tol.weighted));
  }
  return out;
}

} // namespace qbn
