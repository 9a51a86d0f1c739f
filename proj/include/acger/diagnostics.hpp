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
#include <span>
#include <string>
#include <vector>

#include "acger/data.hpp"
#include "acger/model.hpp"

namespace acger {

enum class AttentionTarget { context, members };

struct AttentionRecord {
  ActorKind actor_kind = ActorKind::user;
  std::uint32_t actor = 0;
  std::uint32_t event = 0;
  std::vector<double> weights;
};

// Learned weights for each interaction record. For `context`, the actor-side
// factor weights (users and groups); for `members`, a group's member weights
// in ascending member-id order. Records whose variant has no such weights are
// skipped.
std::vector<AttentionRecord> attention_weights(const Model& model,
                                               std::span<const Interaction> records,
                                               AttentionTarget target);

// Event-side factor weights for event e under ctx; empty when the variant
// bypasses event context.
std::vector<double> event_attention(const Model& model, std::uint32_t e, const ContextTuple& ctx);

// `u:ID|g:ID TAB event TAB w1,w2,...`
void write_attention(const std::string& path, std::span<const AttentionRecord> records);

// Per-position mean over records (all records must share one length).
std::vector<double> mean_weights(std::span<const AttentionRecord> records);

AttentionTarget parse_attention_target(std::string_view s);

}  // namespace acger
