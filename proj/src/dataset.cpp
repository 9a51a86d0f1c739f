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

#include "acger/dataset.hpp"

#include <algorithm>
#include <filesystem>

#include "acger/error.hpp"

namespace acger {

namespace {

void sort_unique(std::vector<std::uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

DataPaths DataPaths::in_directory(const std::string& data_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(data_dir);
  DataPaths p;
  p.interactions = (dir / "interactions.tsv").string();
  p.schema = (dir / "schema.tsv").string();
  p.rosters = (dir / "rosters.tsv").string();
  if (fs::exists(dir / "events.tsv")) p.events = (dir / "events.tsv").string();
  if (fs::exists(dir / "word_vectors.tsv")) p.word_vectors = (dir / "word_vectors.tsv").string();
  if (fs::exists(dir / "event_text.tsv")) p.event_text = (dir / "event_text.tsv").string();
  return p;
}

Dataset load_dataset(const DataPaths& paths, std::size_t dim) {
  Dataset ds;
  ds.schema = load_schema(paths.schema);
  LoadedInteractions loaded = load_interactions(paths.interactions, ds.schema);
  ds.universe = loaded.universe;
  if (!paths.rosters.empty()) {
    ds.rosters = load_rosters(paths.rosters);
  }
  for (const auto& r : ds.rosters) {
    if (loaded.universe_declared) {
      if (r.group_id >= ds.universe.groups) {
        throw_data(paths.rosters + ": group_id " + std::to_string(r.group_id) +
                   " exceeds declared groups");
      }
      if (r.members.back() >= ds.universe.users) {
        throw_data(paths.rosters + ": member id " + std::to_string(r.members.back()) +
                   " exceeds declared users");
      }
    } else {
      ds.universe.groups = std::max<std::size_t>(ds.universe.groups, r.group_id + 1);
      ds.universe.users = std::max<std::size_t>(ds.universe.users, r.members.back() + 1);
    }
  }

  if (!paths.events.empty()) {
    ds.catalog = load_events(paths.events, ds.schema, ds.universe.events);
  }
  if (ds.catalog.size() < ds.universe.events) {
    EventCatalog grown(ds.universe.events);
    for (std::uint32_t e = 0; e < ds.catalog.size(); ++e) {
      if (ds.catalog.known(e)) grown.set(e, ds.catalog.context(e));
    }
    ds.catalog = std::move(grown);
  }

  std::vector<const Interaction*> ordered;
  ordered.reserve(loaded.interactions.size());
  for (const auto& r : loaded.interactions) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(), [](const Interaction* a, const Interaction* b) {
    if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
    if (a->event_id != b->event_id) return a->event_id < b->event_id;
    return a->actor_id < b->actor_id;
  });
  for (const Interaction* r : ordered) {
    if (!ds.catalog.known(r->event_id)) ds.catalog.set(r->event_id, r->context);
  }

  std::vector<std::uint8_t> has_roster(ds.universe.groups, 0);
  for (const auto& r : ds.rosters) has_roster[r.group_id] = 1;
  for (auto& r : loaded.interactions) {
    if (r.actor_kind == ActorKind::user) {
      ds.user_interactions.push_back(std::move(r));
    } else {
      if (!has_roster[r.actor_id]) {
        throw_data(paths.interactions + ": group " + std::to_string(r.actor_id) +
                   " has interactions but no roster");
      }
      ds.group_interactions.push_back(std::move(r));
    }
  }

  if (!paths.word_vectors.empty()) {
    const auto content = ds.schema.content_factor();
    if (!content) {
      throw_usage("word vectors given but the schema has no content factor");
    }
    if (paths.event_text.empty()) {
      throw_usage("word vectors need an event text file");
    }
    const WordVectors vectors = load_word_vectors(paths.word_vectors);
    const auto texts = load_event_text(paths.event_text);
    const std::size_t rows = ds.schema[*content].cardinality;
    DenseMatrix pre(rows, dim);
    const std::vector<std::string> none;
    for (std::uint32_t e = 0; e < rows; ++e) {
      auto it = texts.find(e);
      const auto& words = it == texts.end() ? none : it->second;
      const DenseVector v = build_content_vector(words, vectors, e, dim);
      std::copy(v.begin(), v.end(), pre.row(e).begin());
    }
    ds.pretrained_content = std::move(pre);
  }
  return ds;
}

TaskData make_task_data(const std::vector<Interaction>& interactions, std::size_t actors) {
  TaskData t;
  t.actors = actors;
  t.train_positives.assign(actors, {});
  t.seen_positives.assign(actors, {});
  if (interactions.empty()) {
    return t;
  }
  t.split = temporal_split(interactions);
  for (const auto& r : t.split.train) {
    t.train_positives[r.actor_id].push_back(r.event_id);
    t.seen_positives[r.actor_id].push_back(r.event_id);
  }
  for (const auto& r : t.split.validation) {
    t.seen_positives[r.actor_id].push_back(r.event_id);
  }
  for (auto& v : t.train_positives) sort_unique(v);
  for (auto& v : t.seen_positives) sort_unique(v);
  return t;
}

PreparedData prepare_data(const Dataset& dataset) {
  PreparedData p;
  p.universe = dataset.universe;
  p.users = make_task_data(dataset.user_interactions, dataset.universe.users);
  p.groups = make_task_data(dataset.group_interactions, dataset.universe.groups);
  p.expertise.assign(dataset.universe.users, 0.0);
  for (const auto& r : p.users.split.train) {
    p.expertise[r.actor_id] += 1.0;
    p.train_events.push_back(r.event_id);
  }
  for (const auto& r : p.groups.split.train) p.train_events.push_back(r.event_id);
  sort_unique(p.train_events);
  return p;
}

}  // namespace acger
