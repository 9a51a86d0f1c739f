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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "acger/data.hpp"
#include "acger/model.hpp"
#include "acger/pipeline.hpp"

namespace acger {

// Decides which context tuple a candidate event is scored under: either one
// fixed tuple for every candidate, or each event's own catalog context with a
// fallback for events the catalog does not know.
class ContextPolicy {
 public:
  static ContextPolicy fixed(ContextTuple ctx);
  static ContextPolicy per_event(const EventCatalog& catalog, ContextTuple fallback);

  const ContextTuple& operator()(std::uint32_t event) const;
  bool is_fixed() const noexcept { return catalog_ == nullptr; }
  const ContextTuple& base() const noexcept { return ctx_; }

 private:
  ContextPolicy(const EventCatalog* catalog, ContextTuple ctx)
    : catalog_(catalog), ctx_(std::move(ctx)) {}

  const EventCatalog* catalog_;
  ContextTuple ctx_;
};

struct RankedEntry {
  std::uint32_t event = 0;
  double score = 0.0;

  bool operator==(const RankedEntry&) const = default;
};

struct RankedRecommendation {
  ActorKind actor_kind = ActorKind::user;
  std::uint32_t actor = 0;
  ContextTuple context;  // empty when candidates used their own contexts
  std::vector<RankedEntry> entries;
};

// Predicted score for each candidate, in candidate order. Group scores follow
// the model's aggregation variant (embedding-level or score-level).
std::vector<double> score_candidates(const Model& model, ActorKind kind, std::uint32_t actor,
                                     std::span<const std::uint32_t> candidates,
                                     const ContextPolicy& policy, ForwardCache* cache = nullptr);

// Borda count: each member ranks the candidates (ties by ascending id), the
// lowest position earns 0 and the highest n-1; points are summed per event.
std::vector<double> borda_combine(const std::vector<std::vector<double>>& member_scores,
                                  std::span<const std::uint32_t> candidates);

// Candidates sorted by descending score, ties by ascending event id,
// truncated to n.
std::vector<RankedEntry> rank_scores(std::span<const std::uint32_t> candidates,
                                     std::span<const double> scores, std::size_t n);

RankedRecommendation top_n(const Model& model, ActorKind kind, std::uint32_t actor,
                           std::span<const std::uint32_t> candidates, const ContextPolicy& policy,
                           std::size_t n, ForwardCache* cache = nullptr);

}  // namespace acger
