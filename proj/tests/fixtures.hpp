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

#include "acger/dataset.hpp"
#include "acger/model.hpp"
#include "acger/synthgen.hpp"

namespace testing {

inline acger::Dataset dataset_from(const acger::SynthData& s) {
  acger::Dataset ds;
  ds.schema = s.schema;
  ds.universe = s.universe;
  ds.rosters = s.rosters;
  ds.catalog = s.catalog;
  for (const auto& r : s.interactions) {
    (r.actor_kind == acger::ActorKind::user ? ds.user_interactions : ds.group_interactions)
      .push_back(r);
  }
  return ds;
}

// A few seconds of training at most.
inline acger::SynthConfig small_synth(std::uint64_t seed = 3) {
  acger::SynthConfig c;
  c.users = 30;
  c.events = 60;
  c.groups = 8;
  c.user_interactions = 8;
  c.group_interactions = 6;
  c.factors = {{"organizer", acger::FactorKind::categorical, 4},
               {"time", acger::FactorKind::time_slot, acger::kTimeSlots}};
  c.seed = seed;
  return c;
}

inline acger::ModelConfig small_model_config(const acger::Dataset& ds,
                                             const acger::VariantConfig& v = {}) {
  acger::ModelConfig mc;
  mc.dims = acger::ModelDims{8, {12, 10}, 4};
  mc.schema = ds.schema;
  mc.universe = ds.universe;
  mc.variant = v;
  return mc;
}

}  // namespace testing
