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
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "acger/graph.hpp"
#include "acger/model.hpp"

namespace acger {

// Memo for inference-only graphs: contextualized embeddings keyed by
// (entity, id, factor, value) and event representations keyed by
// (event, context). Valid only while the parameters are unchanged.
class ForwardCache {
 public:
  struct CachedEvent {
    DenseVector raw;
    std::vector<DenseVector> contextualized;
    DenseVector enhanced;
    DenseVector weights;  // empty when the event has no context attention
  };

  const DenseVector* find_contextualized(std::uint64_t key) const;
  void store_contextualized(std::uint64_t key, DenseVector v);
  const CachedEvent* find_event(std::uint32_t e, const ContextTuple& ctx) const;
  void store_event(std::uint32_t e, const ContextTuple& ctx, CachedEvent ev);
  void clear();

 private:
  std::unordered_map<std::uint64_t, DenseVector> contextualized_;
  std::map<std::pair<std::uint32_t, ContextTuple>, CachedEvent> events_;
};

struct EventRep {
  Graph::Var raw;
  std::vector<Graph::Var> contextualized;  // empty when context is bypassed
  Graph::Var enhanced;
  std::optional<Graph::Var> weights;
};

struct ActorRep {
  Graph::Var raw;
  std::vector<Graph::Var> contextualized;
  Graph::Var enhanced;
  std::optional<Graph::Var> weights;
};

struct GroupRep {
  std::optional<ActorRep> direct;
  std::vector<ActorRep> members;
  std::optional<Graph::Var> member_weights;
  std::optional<Graph::Var> indirect;
  Graph::Var fused;
};

// Builds the model's forward computation on a graph, honoring the variant
// configuration of the model.
class Forward {
 public:
  Forward(const Model& model, Graph& graph, ForwardCache* cache = nullptr);

  // Contextualized and enhanced representation of event e under ctx.
  EventRep event(std::uint32_t e, const ContextTuple& ctx);
  // Enhanced user embedding conditioned on the paired event.
  ActorRep user(std::uint32_t u, const ContextTuple& ctx, const EventRep& ev);
  // Group's own enhanced embedding (its direct preference).
  ActorRep group_direct(std::uint32_t g, const ContextTuple& ctx, const EventRep& ev);
  // Member aggregation and fusion with the direct preference.
  GroupRep group(std::uint32_t g, const ContextTuple& ctx, const EventRep& ev);

  Graph::Var user_score(std::uint32_t u, const EventRep& ev, const ContextTuple& ctx);
  Graph::Var group_score(std::uint32_t g, const EventRep& ev, const ContextTuple& ctx);
  Graph::Var user_score(std::uint32_t u, std::uint32_t e, const ContextTuple& ctx);
  Graph::Var group_score(std::uint32_t g, std::uint32_t e, const ContextTuple& ctx);

 private:
  Graph::Var contextualized(EntityKind kind, std::uint32_t id, Graph::Var raw, std::size_t factor,
                            std::uint32_t value);
  Graph::Var attention_scores(AttentionKind kind, std::span<const Graph::Var> left,
                              std::span<const Graph::Var> right);
  Graph::Var uniform_weights(std::size_t n);
  ActorRep actor(EntityKind kind, AttentionKind att, SlotId table, std::uint32_t id,
                 const ContextTuple& ctx, const EventRep& ev);

  const Model& model_;
  Graph& g_;
  ForwardCache* cache_;
};

}  // namespace acger
