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
#include <string>
#include <vector>

#include "acger/data.hpp"

namespace acger {

struct SynthConfig {
  std::size_t users = 200;
  std::size_t events = 500;
  std::size_t groups = 60;
  std::vector<ContextFactor> factors = {
    {"organizer", FactorKind::categorical, 10},
    {"venue", FactorKind::categorical, 10},
    {"time", FactorKind::time_slot, kTimeSlots},
  };
  std::size_t group_size_min = 2;
  std::size_t group_size_max = 6;
  std::size_t user_interactions = 30;
  std::size_t group_interactions = 20;
  std::size_t planted_factor = 0;
  double planted_strength = 0.9;
  double direct_fraction = 0.2;
  std::uint64_t seed = 42;
  std::int64_t year_start = 1451606400;  // 2016-01-01T00:00:00Z

  void validate() const;
};

struct GroupTruth {
  std::uint32_t group = 0;
  std::uint32_t direct_value = 0;    // the group's own preferred value
  std::vector<double> member_weights;  // aligned with the roster
};

struct SynthTruth {
  std::size_t planted_factor = 0;
  double planted_strength = 0.0;
  std::vector<std::uint32_t> user_values;  // preferred planted value per user
  std::vector<GroupTruth> groups;
};

struct SynthData {
  ContextSchema schema;
  Universe universe;
  std::vector<Interaction> interactions;  // users first, then groups
  std::vector<GroupRoster> rosters;
  EventCatalog catalog;
  std::vector<std::int64_t> event_times;
  SynthTruth truth;
};

// Each event gets uniform categorical values and a start time uniform over
// one year; the time-slot factor follows from the start time. A user picks
// events whose planted value equals its preferred value with probability
// planted_strength and uniform events otherwise. A group event follows a
// member drawn by hidden member weights, except a direct_fraction of group
// events that follow the group's own preferred value.
SynthData generate_synth(const SynthConfig& config);

// schema.tsv, interactions.tsv, rosters.tsv, events.tsv, ground_truth.tsv.
void write_synth(const SynthData& data, const std::string& dir);

}  // namespace acger
