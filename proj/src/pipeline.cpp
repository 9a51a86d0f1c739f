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

#include "acger/pipeline.hpp"

#include "acger/error.hpp"

namespace acger {

namespace {

std::uint64_t contextualized_key(EntityKind kind, std::uint32_t id, std::size_t factor,
                                 std::uint32_t value) {
  return (static_cast<std::uint64_t>(kind) << 62) | (static_cast<std::uint64_t>(factor) << 54) |
         (static_cast<std::uint64_t>(value & 0x3fffffu) << 32) | id;
}

}  // namespace

const DenseVector* ForwardCache::find_contextualized(std::uint64_t key) const {
  auto it = contextualized_.find(key);
  return it == contextualized_.end() ? nullptr : &it->second;
}

void ForwardCache::store_contextualized(std::uint64_t key, DenseVector v) {
  contextualized_.emplace(key, std::move(v));
}

const ForwardCache::CachedEvent* ForwardCache::find_event(std::uint32_t e,
                                                          const ContextTuple& ctx) const {
  auto it = events_.find(std::make_pair(e, ctx));
  return it == events_.end() ? nullptr : &it->second;
}

void ForwardCache::store_event(std::uint32_t e, const ContextTuple& ctx, CachedEvent ev) {
  events_.emplace(std::make_pair(e, ctx), std::move(ev));
}

void ForwardCache::clear() {
  contextualized_.clear();
  events_.clear();
}

Forward::Forward(const Model& model, Graph& graph, ForwardCache* cache)
  : model_(model), g_(graph), cache_(graph.recording() ? nullptr : cache) {}

Graph::Var Forward::contextualized(EntityKind kind, std::uint32_t id, Graph::Var raw,
                                   std::size_t factor, std::uint32_t value) {
  const bool cacheable = cache_ && value <= 0x3fffffu && factor < 256;
  const std::uint64_t key = contextualized_key(kind, id, factor, value);
  if (cacheable) {
    if (const DenseVector* hit = cache_->find_contextualized(key)) {
      return g_.constant(*hit);
    }
  }
  const Layout& layout = model_.layout();
  Graph::Var h = g_.concat(raw, g_.lookup(layout.contexts[factor], value));
  const ContextMlp& mlp = layout.mlp(kind, factor);
  for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
    h = g_.relu(g_.affine(mlp.weights[l], mlp.biases[l], h));
  }
  if (cacheable) {
    cache_->store_contextualized(key, g_.vector(h));
  }
  return h;
}

Graph::Var Forward::attention_scores(AttentionKind kind, std::span<const Graph::Var> left,
                                     std::span<const Graph::Var> right) {
  if (left.size() != right.size()) {
    throw_usage("attention: left and right inputs differ in length");
  }
  const AttentionNet& net = model_.layout().att(kind);
  std::vector<Graph::Var> scores;
  scores.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    Graph::Var pre = g_.add(g_.affine(net.w1, net.bias, left[i]), g_.linear(net.w2, right[i]));
    scores.push_back(g_.dot_param(net.proj, g_.relu(pre)));
  }
  return g_.stack(scores);
}

Graph::Var Forward::uniform_weights(std::size_t n) {
  return g_.constant(DenseVector(n, 1.0 / static_cast<double>(n)));
}

EventRep Forward::event(std::uint32_t e, const ContextTuple& ctx) {
  const VariantConfig& variant = model_.variant();
  if (cache_) {
    if (const auto* hit = cache_->find_event(e, ctx)) {
      EventRep rep;
      rep.raw = g_.constant(hit->raw);
      for (const auto& c : hit->contextualized) rep.contextualized.push_back(g_.constant(c));
      rep.enhanced = g_.constant(hit->enhanced);
      if (!hit->weights.empty()) rep.weights = g_.constant(hit->weights);
      return rep;
    }
  }
  const Layout& layout = model_.layout();
  EventRep rep;
  rep.raw = g_.lookup(layout.events, e);
  if (!variant.event_context()) {
    rep.enhanced = rep.raw;
  } else {
    model_.config().schema.validate(ctx);
    const std::size_t k = ctx.size();
    for (std::size_t i = 0; i < k; ++i) {
      rep.contextualized.push_back(contextualized(EntityKind::event, e, rep.raw, i, ctx[i]));
    }
    if (variant.context == ContextWeighting::avg) {
      rep.weights = uniform_weights(k);
    } else {
      std::vector<Graph::Var> left(k, rep.raw);
      rep.weights = g_.softmax(attention_scores(AttentionKind::event, left, rep.contextualized));
    }
    rep.enhanced = g_.weighted_sum(*rep.weights, rep.contextualized);
  }
  if (cache_) {
    ForwardCache::CachedEvent c;
    c.raw = g_.vector(rep.raw);
    for (auto v : rep.contextualized) c.contextualized.push_back(g_.vector(v));
    c.enhanced = g_.vector(rep.enhanced);
    if (rep.weights) c.weights = g_.vector(*rep.weights);
    cache_->store_event(e, ctx, std::move(c));
  }
  return rep;
}

ActorRep Forward::actor(EntityKind kind, AttentionKind att, SlotId table, std::uint32_t id,
                        const ContextTuple& ctx, const EventRep& ev) {
  const VariantConfig& variant = model_.variant();
  ActorRep rep;
  rep.raw = g_.lookup(table, id);
  if (!variant.user_context()) {
    rep.enhanced = rep.raw;
    return rep;
  }
  model_.config().schema.validate(ctx);
  const std::size_t k = ctx.size();
  for (std::size_t i = 0; i < k; ++i) {
    rep.contextualized.push_back(contextualized(kind, id, rep.raw, i, ctx[i]));
  }
  if (variant.context == ContextWeighting::avg) {
    rep.weights = uniform_weights(k);
  } else {
    std::vector<Graph::Var> right;
    if (variant.context == ContextWeighting::ain) {
      right = rep.contextualized;
    } else if (ev.contextualized.empty()) {
      right.assign(k, ev.raw);
    } else {
      right = ev.contextualized;
    }
    rep.weights = g_.softmax(attention_scores(att, rep.contextualized, right));
  }
  rep.enhanced = g_.weighted_sum(*rep.weights, rep.contextualized);
  return rep;
}

ActorRep Forward::user(std::uint32_t u, const ContextTuple& ctx, const EventRep& ev) {
  return actor(EntityKind::user, AttentionKind::user, model_.layout().users, u, ctx, ev);
}

ActorRep Forward::group_direct(std::uint32_t g, const ContextTuple& ctx, const EventRep& ev) {
  return actor(EntityKind::group, AttentionKind::group, model_.layout().groups, g, ctx, ev);
}

GroupRep Forward::group(std::uint32_t g, const ContextTuple& ctx, const EventRep& ev) {
  const VariantConfig& variant = model_.variant();
  if (variant.score_level_aggregation()) {
    throw_usage("score-level aggregation has no group embedding");
  }
  GroupRep rep;
  if (variant.preference != Preference::indirect_only) {
    rep.direct = group_direct(g, ctx, ev);
  }
  if (variant.preference != Preference::direct_only) {
    const auto& members = model_.members(g);
    std::vector<Graph::Var> enhanced;
    for (std::uint32_t u : members) {
      rep.members.push_back(user(u, ctx, ev));
      enhanced.push_back(rep.members.back().enhanced);
    }
    switch (variant.aggregation) {
      case Aggregation::attention: {
        std::vector<Graph::Var> event_side(enhanced.size(), ev.enhanced);
        rep.member_weights = g_.softmax(attention_scores(AttentionKind::member, enhanced, event_side));
        break;
      }
      case Aggregation::avg:
        rep.member_weights = uniform_weights(enhanced.size());
        break;
      case Aggregation::expertise: {
        const auto& counts = model_.expertise();
        DenseVector w(members.size(), 0.0);
        double total = 0.0;
        for (std::size_t i = 0; i < members.size(); ++i) {
          w[i] = counts.empty() ? 0.0 : counts[members[i]];
          total += w[i];
        }
        for (double& x : w) {
          x = total > 0.0 ? x / total : 1.0 / static_cast<double>(members.size());
        }
        rep.member_weights = g_.constant(std::move(w));
        break;
      }
      case Aggregation::borda:
      case Aggregation::most_pleasure:
        break;
    }
    rep.indirect = g_.weighted_sum(*rep.member_weights, enhanced);
  }
  if (rep.direct && rep.indirect) {
    rep.fused = g_.add(*rep.indirect, rep.direct->enhanced);
  } else if (rep.indirect) {
    rep.fused = *rep.indirect;
  } else {
    rep.fused = rep.direct->enhanced;
  }
  return rep;
}

Graph::Var Forward::user_score(std::uint32_t u, const EventRep& ev, const ContextTuple& ctx) {
  const ActorRep a = user(u, ctx, ev);
  const FmSlots& fm = model_.layout().fm_user;
  return g_.fm(fm.w0, fm.w1, fm.v, g_.concat(a.enhanced, ev.enhanced));
}

Graph::Var Forward::group_score(std::uint32_t g, const EventRep& ev, const ContextTuple& ctx) {
  const GroupRep rep = group(g, ctx, ev);
  const FmSlots& fm = model_.layout().fm_group;
  return g_.fm(fm.w0, fm.w1, fm.v, g_.concat(rep.fused, ev.enhanced));
}

Graph::Var Forward::user_score(std::uint32_t u, std::uint32_t e, const ContextTuple& ctx) {
  return user_score(u, event(e, ctx), ctx);
}

Graph::Var Forward::group_score(std::uint32_t g, std::uint32_t e, const ContextTuple& ctx) {
  return group_score(g, event(e, ctx), ctx);
}

}  // namespace acger
