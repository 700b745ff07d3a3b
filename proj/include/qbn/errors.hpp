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

#include <stdexcept>
#include <string>

namespace qbn {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Requested truncation or matrix size exceeds a hard cap.
class CapacityError : public Error {
public:
  using Error::Error;
};

class ModeOutOfRange : public Error {
public:
  using Error::Error;
};

/// Operand dimensions (mode counts, table lengths) do not agree.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Argument outside its mathematical domain (negative rate, t < 0, p not in (0,1)).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A constructed object failed a self-check. Indicates a library bug.
class ConsistencyError : public Error {
public:
  using Error::Error;
};

} // namespace qbn
