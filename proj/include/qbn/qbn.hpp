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

#include "qbn/algebra_verify.hpp"
#include "qbn/bernoulli.hpp"
#include "qbn/errors.hpp"
#include "qbn/exclusion.hpp"
#include "qbn/expm.hpp"
#include "qbn/fock.hpp"
#include "qbn/io.hpp"
#include "qbn/report.hpp"
#include "qbn/scenario.hpp"
#include "qbn/semigroup.hpp"
#include "qbn/suite.hpp"
#include "qbn/tolerances.hpp"
#include "qbn/weighted_number.hpp"
