// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

/// \file
/// Convenience header pulling in the whole library.

#pragma once

#include "peach/adaptive.hpp"
#include "peach/bench.hpp"
#include "peach/config.hpp"
#include "peach/error.hpp"
#include "peach/estimators.hpp"
#include "peach/experiments.hpp"
#include "peach/linalg.hpp"
#include "peach/monte_carlo.hpp"
#include "peach/mse.hpp"
#include "peach/report.hpp"
#include "peach/rng.hpp"
#include "peach/scenario.hpp"
#include "peach/validate.hpp"
