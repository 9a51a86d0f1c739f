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

#include "acger/scoring.hpp"

#include <algorithm>
#include <numeric>

#include "acger/error.hpp"

namespace acger {

ContextPolicy ContextPolicy::fixed(ContextTuple ctx) {
  return ContextPolicy(nullptr, std::move(ctx));
}

ContextPolicy ContextPolicy::per_event(const EventCatalog& catalog, ContextTuple fallback) {
  return ContextPolicy(&catalog, std::move(fallback));
}

const ContextTuple& ContextPolicy::operator()(std::uint32_t event) const {
  return catalog_ ? catalog_->context_or(event, ctx_) : ctx_;
}

namespace {

std::vector<double> user_scores(const Model& model, std::uint32_t user,
                                std::span<const std::uint32_t> candidates,
                                const ContextPolicy& policy, ForwardCache* cache) {
  Graph g(model.params(), nullptr);
  std::vector<double> out;
  out.reserve(candidates.size());
  for (std::uint32_t e : candidates) {
    g.clear();
    Forward fwd(model, g, cache);
    out.push_back(g.scalar(fwd.user_score(user, e, policy(e))));
  }
  return out;
}

}  // namespace

std::vector<double> score_candidates(const Model& model, ActorKind kind, std::uint32_t actor,
                                     std::span<const std::uint32_t> candidates,
                                     const ContextPolicy& policy, ForwardCache* cache) {
  if (kind == ActorKind::user) {
    return user_scores(model, actor, candidates, policy, cache);
  }
  const VariantConfig& variant = model.variant();
  if (variant.score_level_aggregation()) {
    std::vector<std::vector<double>> per_member;
    for (std::uint32_t u : model.members(actor)) {
      per_member.push_back(user_scores(model, u, candidates, policy, cache));
    }
    if (variant.aggregation == Aggregation::borda) {
      return borda_combine(per_member, candidates);
    }
    std::vector<double> best = per_member.front();
    for (std::size_t m = 1; m < per_member.size(); ++m) {
      for (std::size_t i = 0; i < best.size(); ++i) {
        best[i] = std::max(best[i], per_member[m][i]);
      }
    }
    return best;
  }
  Graph g(model.params(), nullptr);
  std::vector<double> out;
  out.reserve(candidates.size());
  for (std::uint32_t e : candidates) {
    g.clear();
    Forward fwd(model, g, cache);
    out.push_back(g.scalar(fwd.group_score(actor, e, policy(e))));
  }
  return out;
}

std::vector<double> borda_combine(const std::vector<std::vector<double>>& member_scores,
                                  std::span<const std::uint32_t> candidates) {
  const std::size_t n = candidates.size();
  std::vector<double> points(n, 0.0);
  std::vector<std::size_t> order(n);
  for (const auto& scores : member_scores) {
    if (scores.size() != n) {
      throw_usage("borda: member score list length differs from candidates");
    }
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (scores[a] != scores[b]) return scores[a] > scores[b];
      return candidates[a] < candidates[b];
    });
    for (std::size_t pos = 0; pos < n; ++pos) {
      points[order[pos]] += static_cast<double>(n - 1 - pos);
    }
  }
  return points;
}

std::vector<RankedEntry> rank_scores(std::span<const std::uint32_t> candidates,
                                     std::span<const double> scores, std::size_t n) {
  if (candidates.size() != scores.size()) {
    throw_usage("rank_scores: candidates and scores differ in length");
  }
  std::vector<RankedEntry> entries(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    entries[i] = RankedEntry{candidates[i], scores[i]};
  }
  auto better = [](const RankedEntry& a, const RankedEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.event < b.event;
  };
  const std::size_t keep = std::min(n, entries.size());
  std::partial_sort(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep),
                    entries.end(), better);
  entries.resize(keep);
  return entries;
}

RankedRecommendation top_n(const Model& model, ActorKind kind, std::uint32_t actor,
                           std::span<const std::uint32_t> candidates, const ContextPolicy& policy,
                           std::size_t n, ForwardCache* cache) {
  if (candidates.empty()) {
    throw_usage("top_n: no candidate events");
  }
  std::vector<std::uint32_t> unique(candidates.begin(), candidates.end());
  std::sort(unique.begin(), unique.end());
  unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
  const auto scores = score_candidates(model, kind, actor, unique, policy, cache);
  RankedRecommendation rec;
  rec.actor_kind = kind;
  rec.actor = actor;
  if (policy.is_fixed()) rec.context = policy.base();
  rec.entries = rank_scores(unique, scores, n);
  return rec;
}

}  // namespace acger
