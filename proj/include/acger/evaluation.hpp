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
#include "acger/dataset.hpp"
#include "acger/model.hpp"

namespace acger {

// relevant_sorted must be sorted ascending.
double precision_at(std::span<const std::uint32_t> ranked,
                    std::span<const std::uint32_t> relevant_sorted, std::size_t n);
double recall_at(std::span<const std::uint32_t> ranked,
                 std::span<const std::uint32_t> relevant_sorted, std::size_t n);
// Binary-gain DCG over the top n, normalized by the ideal DCG at
// min(n, |relevant|).
double ndcg_at(std::span<const std::uint32_t> ranked,
               std::span<const std::uint32_t> relevant_sorted, std::size_t n);

struct MetricsAtN {
  std::size_t n = 0;
  double precision = 0.0;
  double recall = 0.0;
  double ndcg = 0.0;
};

struct MetricTable {
  std::vector<MetricsAtN> rows;
  std::size_t actors = 0;  // actors with at least one relevant event

  // Throws when n was not evaluated.
  const MetricsAtN& at(std::size_t n) const;
};

struct ActorMetrics {
  std::uint32_t actor = 0;
  std::vector<std::uint32_t> relevant;
  std::vector<std::uint32_t> ranked;  // top max(n)
  std::vector<MetricsAtN> metrics;
};

enum class EvalSplit { validation, test };

struct EvalOptions {
  std::vector<std::size_t> ns = {5, 10};
  std::size_t threads = 1;
  std::vector<ActorMetrics>* details = nullptr;
};

// Ranks every event of the universe, minus the actor's earlier positives,
// for each actor with interactions in the split. Candidates are scored under
// their own catalog contexts.
MetricTable evaluate(const Model& model, const TaskData& task, ActorKind kind, EvalSplit split,
                     const EvalOptions& options = {});

// NDCG@n a uniformly random ranking achieves in expectation on the same
// actors and candidate sets.
double expected_random_ndcg(const TaskData& task, std::size_t universe_events, EvalSplit split,
                            std::size_t n);

std::string split_name(EvalSplit split);

}  // namespace acger
