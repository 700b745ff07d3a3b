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

namespace qbn {

/// Default acceptance thresholds, in one place. `scaled` multiplies every
/// threshold except the negative-control floor, which is a lower bound.
struct Tolerances {
  double exact = 0.0;                 // identities between 0/1-entry operators
  double weighted = 1e-12;            // identities involving real kernel weights
  double admissibility = 1e-12;       // G + G* = -S_w and sum L*L = S_w
  double explicit_semigroup = 1e-10;  // closed-form P_t against exp(tG)
  double evolution = 1e-8;            // T_t(I) = I, T_t(N) = N, duality, CP eigenvalues
  double semigroup_law = 1e-7;
  double trace = 1e-10;
  double diagonal_tv = 1e-6;          // quantum diagonal vs classical ODE
  double off_diagonal = 1e-10;        // diagonal states stay diagonal
  double gillespie = 0.01;
  double negative_control_floor = 1e-4;

  Tolerances scaled(double f) const {
    Tolerances t = *this;
    t.exact *= f;
    t.weighted *= f;
    t.admissibility *= f;
    t.explicit_semigroup *= f;
    t.evolution *= f;
    t.semigroup_law *= f;
    t.trace *= f;
    t.diagonal_tv *= f;
    t.off_diagonal *= f;
    t.gillespie *= f;
    return t;
  }
};

} // namespace qbn
