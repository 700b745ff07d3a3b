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

// JSON schemas for kernels, weight functions, Hamiltonians and subsets, plus
// fixed-format number output for CSV.

#include <array>
#include <charconv>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qbn/errors.hpp"
#include "qbn/fock.hpp"
#include "qbn/semigroup.hpp"
#include "qbn/weighted_number.hpp"

namespace qbn {

/// Input document does not follow the expected schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

namespace io {

using nlohmann::json;

inline const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline double as_number(const json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

inline int as_int(const json& j, const char* what) {
  if (!j.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline std::vector<double> as_numbers(const json& j, const char* what) {
  if (!j.is_array()) throw SchemaError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(as_number(x, what));
  return out;
}

/// Sorted JSON array of modes, e.g. [0,2].
inline json subset_to_json(SubsetIndex s) { return s.modes(); }

inline SubsetIndex subset_from_json(const json& j, ModeCount n) {
  if (!j.is_array()) throw SchemaError("subset must be an array of mode indices");
  SubsetIndex s;
  for (const auto& x : j) {
    const int k = as_int(x, "subset entry");
    if (k < 0 || k >= n.value()) {
      throw SchemaError("subset entry " + std::to_string(k) + " outside 0.." + std::to_string(n.value() - 1));
    }
    if (s.contains(k)) throw SchemaError("subset entry " + std::to_string(k) + " repeated");
    s = s.with(k);
  }
  return s;
}

inline std::string subset_to_string(SubsetIndex s) { return subset_to_json(s).dump(); }

/// Reads a mode count, mapping domain errors to schema errors and keeping capacity errors.
inline ModeCount mode_count(const json& j, const char* what) {
  const int n = as_int(j, what);
  if (n < 1) throw SchemaError(std::string(what) + " must be positive");
  return ModeCount(n);
}

/// {"n": int?, "type": "canonical"|"nearest_neighbor"|"explicit", "params": {...}, "table": [[...]]}
/// `n` may be omitted when the caller supplies the mode count.
inline TransitionKernel kernel_from_json(const json& j, std::optional<ModeCount> modes = std::nullopt) {
  if (!j.is_object()) throw SchemaError("kernel must be an object");
  ModeCount n = modes ? *modes : mode_count(require(j, "n"), "kernel.n");
  if (modes && j.contains("n") && as_int(j.at("n"), "kernel.n") != modes->value()) {
    throw SchemaError("kernel.n disagrees with scenario modes");
  }
  const json& type = require(j, "type");
  if (!type.is_string()) throw SchemaError("kernel.type must be a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "canonical") return TransitionKernel::canonical(n);
    if (t == "nearest_neighbor") {
      const json& p = require(j, "params");
      return TransitionKernel::nearest_neighbor(n, as_number(require(p, "a"), "params.a"),
                                                as_number(require(p, "b"), "params.b"),
                                                as_number(require(p, "d"), "params.d"));
    }
    if (t == "explicit") {
      const json& rows = require(j, "table");
      if (!rows.is_array() || static_cast<int>(rows.size()) != n.value()) {
        throw SchemaError("kernel.table must have one row per mode");
      }
      Eigen::MatrixXd w(n.value(), n.value());
      for (int r = 0; r < n.value(); ++r) {
        const auto row = as_numbers(rows[static_cast<std::size_t>(r)], "kernel.table row");
        if (static_cast<int>(row.size()) != n.value()) throw SchemaError("kernel.table must be square");
        for (int c = 0; c < n.value(); ++c) w(r, c) = row[static_cast<std::size_t>(c)];
      }
      return {n, std::move(w)};
    }
  } catch (const DomainError& e) {
    throw SchemaError(std::string("invalid kernel: ") + e.what());
  }
  throw SchemaError("unknown kernel type '" + t + "'");
}

inline json kernel_to_json(const TransitionKernel& w) {
  json table = json::array();
  for (int r = 0; r < w.modes().value(); ++r) {
    json row = json::array();
    for (int c = 0; c < w.modes().value(); ++c) row.push_back(w.weight(r, c));
    table.push_back(std::move(row));
  }
  return {{"n", w.modes().value()}, {"type", "explicit"}, {"table", std::move(table)}};
}

/// {"n": int, "u": [...]}
inline WeightFunction weight_from_json(const json& j) {
  const ModeCount n = mode_count(require(j, "n"), "weight.n");
  try {
    return {n, as_numbers(require(j, "u"), "weight.u")};
  } catch (const DomainError& e) {
    throw SchemaError(std::string("invalid weight function: ") + e.what());
  } catch (const ShapeError& e) {
    throw SchemaError(std::string("invalid weight function: ") + e.what());
  }
}

/// {"type": "zero"} | {"type": "one_body", "epsilon": [...]} | {"type": "explicit", "table": [...]}
inline HamiltonianTable hamiltonian_from_json(const json& j, ModeCount n) {
  const json& type = require(j, "type");
  if (!type.is_string()) throw SchemaError("hamiltonian.type must be a string");
  const std::string t = type.get<std::string>();
  try {
    if (t == "zero") return HamiltonianTable::zero(n);
    if (t == "one_body") {
      const auto eps = as_numbers(require(j, "epsilon"), "hamiltonian.epsilon");
      return HamiltonianTable::one_body(n, eps);
    }
    if (t == "explicit") {
      const auto f = as_numbers(require(j, "table"), "hamiltonian.table");
      return {n, Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()))};
    }
  } catch (const ShapeError& e) {
    throw SchemaError(std::string("invalid hamiltonian: ") + e.what());
  }
  throw SchemaError("unknown hamiltonian type '" + t + "'");
}

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

} // namespace io
} // namespace qbn
