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

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace qbn {

/// Outcome of one residual check. Reports are data; callers decide what a
/// failure means.
struct IdentityReport {
  std::string identity;
  int n = 0;
  nlohmann::json params = nlohmann::json::object();
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline IdentityReport make_report(std::string identity, int n, nlohmann::json params,
                                  double residual, double tolerance) {
  if (params.is_null()) params = nlohmann::json::object();
  return {std::move(identity), n, std::move(params), residual, tolerance, residual <= tolerance};
}

inline void to_json(nlohmann::json& j, const IdentityReport& r) {
  j = nlohmann::json{{"identity", r.identity}, {"n", r.n},           {"params", r.params},
                     {"residual", r.residual}, {"tolerance", r.tolerance}, {"pass", r.pass}};
}

inline bool all_pass(const std::vector<IdentityReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

inline double max_residual(const std::vector<IdentityReport>& reports) {
  double m = 0.0;
  for (const auto& r : reports) m = std::max(m, r.residual);
  return m;
}

} // namespace qbn
