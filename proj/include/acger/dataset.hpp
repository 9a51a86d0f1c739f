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

#include <optional>
#include <string>
#include <vector>

#include "acger/data.hpp"
#include "acger/numerics.hpp"

namespace acger {

// Files making up one dataset. Empty optional paths are simply absent.
struct DataPaths {
  std::string interactions;
  std::string schema;
  std::string rosters;
  std::string events;        // optional per-event contexts
  std::string word_vectors;  // optional, needs event_text
  std::string event_text;    // optional

  // data_dir/{interactions,schema,rosters,events}.tsv; optional files are
  // kept only if they exist.
  static DataPaths in_directory(const std::string& data_dir);
};

struct Dataset {
  ContextSchema schema;
  Universe universe;
  std::vector<GroupRoster> rosters;
  EventCatalog catalog;
  std::vector<Interaction> user_interactions;
  std::vector<Interaction> group_interactions;
  std::optional<DenseMatrix> pretrained_content;
};

// Loads and cross-validates every file. `dim` is the embedding size the
// pretrained content rows must match.
Dataset load_dataset(const DataPaths& paths, std::size_t dim);

// One task's chronological split plus per-actor positive sets.
struct TaskData {
  DatasetSplit split;
  std::size_t actors = 0;
  std::vector<std::vector<std::uint32_t>> train_positives;  // sorted, unique
  std::vector<std::vector<std::uint32_t>> seen_positives;   // train + validation
};

struct PreparedData {
  Universe universe;
  TaskData users;
  TaskData groups;
  std::vector<double> expertise;  // train-split interaction count per user
  // Events with a train-split interaction in either task: the events that
  // exist by the end of the training period.
  std::vector<std::uint32_t> train_events;
};

TaskData make_task_data(const std::vector<Interaction>& interactions, std::size_t actors);
PreparedData prepare_data(const Dataset& dataset);

}  // namespace acger
