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

// Action of exp(tA) for a sparse generator A on a dense vector or block,
// by scaling and truncated Taylor series. The step count keeps ||hA||_1 <= 1
// so every partial sum is well conditioned.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qbn/errors.hpp"

namespace qbn {

template <typename Scalar>
double one_norm(const Eigen::SparseMatrix<Scalar>& a) {
  double best = 0.0;
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    double col = 0.0;
    for (typename Eigen::SparseMatrix<Scalar>::InnerIterator it(a, c); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

template <typename Scalar, typename Dense>
Dense expm_action(const Eigen::SparseMatrix<Scalar>& a, double t, const Dense& v) {
  if (t < 0.0) throw DomainError("negative evolution time");
  if (a.cols() != v.rows()) throw ShapeError("generator and operand sizes differ");
  const double norm = one_norm(a) * t;
  if (t == 0.0 || norm == 0.0) return v;

  const auto steps = static_cast<long>(std::max(1.0, std::ceil(norm)));
  const double h = t / static_cast<double>(steps);
  constexpr int kMaxTerms = 60;
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  Dense x = v;
  for (long s = 0; s < steps; ++s) {
    Dense term = x;
    Dense sum = x;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= kMaxTerms; ++k) {
      term = (a * term) * (h / k);
      sum += term;
      const double size = term.cwiseAbs().maxCoeff();
      const double scale = sum.cwiseAbs().maxCoeff();
      // two consecutive negligible terms: the tail is below rounding
      if (size <= kEps * scale && prev <= kEps * scale) break;
      prev = size;
    }
    x = std::move(sum);
  }
  return x;
}

} // namespace qbn
