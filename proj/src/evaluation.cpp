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

#include "acger/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include "acger/error.hpp"
#include "acger/scoring.hpp"

namespace acger {

namespace {

bool contains(std::span<const std::uint32_t> sorted, std::uint32_t x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

std::size_t hits_at(std::span<const std::uint32_t> ranked,
                    std::span<const std::uint32_t> relevant, std::size_t n) {
  std::size_t hits = 0;
  const std::size_t top = std::min(n, ranked.size());
  for (std::size_t i = 0; i < top; ++i) hits += contains(relevant, ranked[i]) ? 1 : 0;
  return hits;
}

struct ActorTask {
  std::uint32_t actor = 0;
  std::vector<std::uint32_t> relevant;
  ContextTuple fallback;
};

// Relevant events per actor for the split, minus events already seen earlier
// (they are not candidates). Fallback context is the actor's first record.
std::vector<ActorTask> collect(const TaskData& task, EvalSplit split) {
  const auto& records = split == EvalSplit::test ? task.split.test : task.split.validation;
  const auto& excluded = split == EvalSplit::test ? task.seen_positives : task.train_positives;
  std::map<std::uint32_t, ActorTask> by_actor;
  for (const auto& r : records) {
    if (r.actor_id >= excluded.size()) continue;
    auto [it, fresh] = by_actor.try_emplace(r.actor_id);
    if (fresh) {
      it->second.actor = r.actor_id;
      it->second.fallback = r.context;
    }
    if (!contains(excluded[r.actor_id], r.event_id)) it->second.relevant.push_back(r.event_id);
  }
  std::vector<ActorTask> out;
  for (auto& [id, t] : by_actor) {
    std::sort(t.relevant.begin(), t.relevant.end());
    t.relevant.erase(std::unique(t.relevant.begin(), t.relevant.end()), t.relevant.end());
    if (!t.relevant.empty()) out.push_back(std::move(t));
  }
  return out;
}

const std::vector<std::uint32_t>& excluded_for(const TaskData& task, EvalSplit split,
                                              std::uint32_t actor) {
  return split == EvalSplit::test ? task.seen_positives[actor] : task.train_positives[actor];
}

}  // namespace

double precision_at(std::span<const std::uint32_t> ranked,
                    std::span<const std::uint32_t> relevant_sorted, std::size_t n) {
  if (n == 0) throw_usage("precision_at: n must be positive");
  return static_cast<double>(hits_at(ranked, relevant_sorted, n)) / static_cast<double>(n);
}

double recall_at(std::span<const std::uint32_t> ranked,
                 std::span<const std::uint32_t> relevant_sorted, std::size_t n) {
  if (relevant_sorted.empty()) return 0.0;
  return static_cast<double>(hits_at(ranked, relevant_sorted, n)) /
         static_cast<double>(relevant_sorted.size());
}

double ndcg_at(std::span<const std::uint32_t> ranked,
               std::span<const std::uint32_t> relevant_sorted, std::size_t n) {
  if (relevant_sorted.empty()) return 0.0;
  double dcg = 0.0;
  const std::size_t top = std::min(n, ranked.size());
  for (std::size_t i = 0; i < top; ++i) {
    if (contains(relevant_sorted, ranked[i])) dcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  }
  double idcg = 0.0;
  const std::size_t ideal = std::min(n, relevant_sorted.size());
  for (std::size_t i = 0; i < ideal; ++i) idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
  return dcg / idcg;
}

const MetricsAtN& MetricTable::at(std::size_t n) const {
  for (const auto& r : rows) {
    if (r.n == n) return r;
  }
  throw_usage("metrics at N=" + std::to_string(n) + " were not computed");
}

std::string split_name(EvalSplit split) {
  return split == EvalSplit::test ? "test" : "validation";
}

MetricTable evaluate(const Model& model, const TaskData& task, ActorKind kind, EvalSplit split,
                     const EvalOptions& options) {
  if (options.ns.empty()) throw_usage("evaluate: no cutoffs given");
  for (std::size_t n : options.ns) {
    if (n == 0) throw_usage("evaluate: cutoff N must be positive");
  }
  const std::size_t max_n = *std::max_element(options.ns.begin(), options.ns.end());
  const std::size_t universe = model.config().universe.events;
  const auto actors = collect(task, split);

  std::vector<ActorMetrics> results(actors.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    ForwardCache cache;
    std::vector<std::uint32_t> candidates;
    for (std::size_t i = next++; i < actors.size(); i = next++) {
      const ActorTask& t = actors[i];
      const auto& excluded = excluded_for(task, split, t.actor);
      candidates.clear();
      for (std::uint32_t e = 0; e < universe; ++e) {
        if (!contains(excluded, e)) candidates.push_back(e);
      }
      const ContextPolicy policy = ContextPolicy::per_event(model.catalog(), t.fallback);
      const auto scores = score_candidates(model, kind, t.actor, candidates, policy, &cache);
      const auto ranked_entries = rank_scores(candidates, scores, max_n);
      ActorMetrics& m = results[i];
      m.actor = t.actor;
      m.relevant = t.relevant;
      for (const auto& r : ranked_entries) m.ranked.push_back(r.event);
      for (std::size_t n : options.ns) {
        m.metrics.push_back(MetricsAtN{n, precision_at(m.ranked, m.relevant, n),
                                       recall_at(m.ranked, m.relevant, n),
                                       ndcg_at(m.ranked, m.relevant, n)});
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, actors.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  MetricTable table;
  table.actors = results.size();
  for (std::size_t j = 0; j < options.ns.size(); ++j) {
    MetricsAtN sum{options.ns[j]};
    for (const auto& m : results) {
      sum.precision += m.metrics[j].precision;
      sum.recall += m.metrics[j].recall;
      sum.ndcg += m.metrics[j].ndcg;
    }
    if (!results.empty()) {
      const double count = static_cast<double>(results.size());
      sum.precision /= count;
      sum.recall /= count;
      sum.ndcg /= count;
    }
    table.rows.push_back(sum);
  }
  if (options.details) *options.details = std::move(results);
  return table;
}

double expected_random_ndcg(const TaskData& task, std::size_t universe_events, EvalSplit split,
                            std::size_t n) {
  const auto actors = collect(task, split);
  if (actors.empty()) return 0.0;
  double total = 0.0;
  for (const auto& t : actors) {
    const auto& excluded = excluded_for(task, split, t.actor);
    const double c = static_cast<double>(universe_events - excluded.size());
    const double r = static_cast<double>(t.relevant.size());
    double dcg = 0.0;
    const std::size_t top = std::min<std::size_t>(n, static_cast<std::size_t>(c));
    for (std::size_t i = 0; i < top; ++i) dcg += (r / c) / std::log2(static_cast<double>(i) + 2.0);
    double idcg = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(n, t.relevant.size()); ++i) {
      idcg += 1.0 / std::log2(static_cast<double>(i) + 2.0);
    }
    total += dcg / idcg;
  }
  return total / static_cast<double>(actors.size());
}

}  // namespace acger
