// Copyright 2026 The rlq Authors
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

#include "rlq/config.hpp"
#include "rlq/control_sim.hpp"
#include "rlq/csv.hpp"
#include "rlq/errors.hpp"
#include "rlq/experiments.hpp"
#include "rlq/matrix.hpp"
#include "rlq/param_model.hpp"
#include "rlq/presets.hpp"
#include "rlq/qlearning.hpp"
#include "rlq/qmatrix.hpp"
#include "rlq/riccati.hpp"
#include "rlq/rng.hpp"
