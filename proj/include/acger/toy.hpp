/*
 * Copyright 2026 The acger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "acger/gradcheck.hpp"
#include "acger/model.hpp"
#include "acger/training.hpp"

namespace acger {

// Tiny fixed instance for gradient checks: d=8, three factors (two
// categorical, one time slot), hidden {12, 10}, fm_rank 4, four users, six
// events and one group of three members.
struct ToyInstance {
  ModelConfig config;
  std::vector<GroupRoster> rosters;
  EventCatalog catalog;
  PreparedData data;
  TrainingTriple user_triple;
  TrainingTriple group_triple;
};

ToyInstance make_toy_instance(const VariantConfig& variant = {});
Model make_toy_model(const ToyInstance& toy, std::uint64_t seed);

// Gradient check of the total objective (group BPR + individual BPR + L2 on
// touched parameters) of one positive/negative pair per task. Parameters
// take a random sign and a magnitude uniform in [0.1, 0.5].
GradCheckReport toy_gradcheck(std::uint64_t seed, double h, const VariantConfig& variant = {});

}  // namespace acger
