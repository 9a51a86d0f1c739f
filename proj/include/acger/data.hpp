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

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "acger/numerics.hpp"

namespace acger {

using Rng = std::mt19937_64;
using ContextTuple = std::vector<std::uint32_t>;

enum class FactorKind : std::uint8_t { categorical, time_slot, content };

inline constexpr std::size_t kTimeSlots = 7 * 24;

struct ContextFactor {
  std::string name;
  FactorKind kind = FactorKind::categorical;
  std::size_t cardinality = 1;

  bool operator==(const ContextFactor&) const = default;
};

std::string_view factor_kind_name(FactorKind kind);
FactorKind parse_factor_kind(std::string_view s);

// Ordered list of the k contextual factors.
class ContextSchema {
 public:
  ContextSchema() = default;
  explicit ContextSchema(std::vector<ContextFactor> factors);

  std::size_t size() const noexcept { return factors_.size(); }
  const ContextFactor& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<ContextFactor>& factors() const noexcept { return factors_; }

  std::optional<std::size_t> time_factor() const;
  std::optional<std::size_t> content_factor() const;

  // Throws naming the offending factor.
  void validate(std::span<const std::uint32_t> values) const;

  // Stable textual form, one factor per line; the schema file format.
  std::string canonical() const;

  bool operator==(const ContextSchema&) const = default;

 private:
  std::vector<ContextFactor> factors_;
};

enum class ActorKind : std::uint8_t { user, group };

struct Interaction {
  ActorKind actor_kind = ActorKind::user;
  std::uint32_t actor_id = 0;
  std::uint32_t event_id = 0;
  ContextTuple context;
  std::int64_t timestamp = 0;  // event start, seconds since epoch (UTC)

  bool operator==(const Interaction&) const = default;
};

struct GroupRoster {
  std::uint32_t group_id = 0;
  std::vector<std::uint32_t> members;  // ascending, distinct
};

struct Universe {
  std::size_t users = 0;
  std::size_t events = 0;
  std::size_t groups = 0;

  bool operator==(const Universe&) const = default;
};

struct DatasetSplit {
  std::vector<Interaction> train;
  std::vector<Interaction> validation;
  std::vector<Interaction> test;
};

// Canonical context of each event (its organizer, venue, time, ...), used to
// score candidates that carry no interaction record of their own.
class EventCatalog {
 public:
  EventCatalog() = default;
  explicit EventCatalog(std::size_t n_events) : contexts_(n_events), known_(n_events, 0) {}

  std::size_t size() const noexcept { return contexts_.size(); }
  bool known(std::uint32_t e) const { return e < known_.size() && known_[e] != 0; }
  const ContextTuple& context(std::uint32_t e) const { return contexts_[e]; }
  void set(std::uint32_t e, ContextTuple ctx);
  // Context of e if known, otherwise the fallback.
  const ContextTuple& context_or(std::uint32_t e, const ContextTuple& fallback) const {
    return known(e) ? contexts_[e] : fallback;
  }

  bool operator==(const EventCatalog&) const = default;

 private:
  std::vector<ContextTuple> contexts_;
  std::vector<std::uint8_t> known_;
};

// --- time slots --------------------------------------------------------------

struct ParsedTime {
  std::int64_t utc_seconds = 0;
  std::size_t slot = 0;  // weekday-hour slot of the local wall-clock time
};

// Monday 00:00-00:59 -> 0 ... Sunday 23:00-23:59 -> 167.
std::size_t encode_time_slot(int year, int month, int day, int hour);
// Slot of a wall-clock time expressed as seconds since 1970-01-01T00:00.
std::size_t encode_time_slot(std::int64_t wall_seconds);
// YYYY-MM-DDTHH:MM[:SS][Z|±HH:MM]. The slot uses the written wall clock.
ParsedTime parse_iso8601(std::string_view text);
std::string format_iso8601(std::int64_t utc_seconds);

// --- content vectors ---------------------------------------------------------

using WordVectors = std::map<std::string, DenseVector, std::less<>>;

// Mean of the vectors of the words found in the map, counting repeated tokens.
// With no matched word, a N(0, 0.1^2) vector seeded by event_id.
DenseVector build_content_vector(std::span<const std::string> words,
                                 const WordVectors& vectors, std::uint32_t event_id,
                                 std::size_t dim);

// --- splitting and sampling ----------------------------------------------------

// Stable sort by (timestamp, event_id, actor_id); first ceil(0.8n) train,
// next ceil(0.1n) validation, remainder test.
DatasetSplit temporal_split(std::vector<Interaction> interactions);

// Uniform event id in [0, universe) not contained in interacted_sorted.
std::uint32_t sample_negative(std::span<const std::uint32_t> interacted_sorted,
                              std::size_t universe, Rng& rng);

// Uniform element of pool_sorted (distinct ids) not in interacted_sorted.
std::uint32_t sample_negative_from(std::span<const std::uint32_t> pool_sorted,
                                   std::span<const std::uint32_t> interacted_sorted, Rng& rng);

// --- files -------------------------------------------------------------------

struct LoadedInteractions {
  std::vector<Interaction> interactions;
  Universe universe;  // header-declared or inferred as max id + 1
  bool universe_declared = false;
};

ContextSchema load_schema(const std::string& path);
void write_schema(const std::string& path, const ContextSchema& schema);

LoadedInteractions load_interactions(const std::string& path, const ContextSchema& schema);
void write_interactions(const std::string& path, std::span<const Interaction> interactions,
                        const std::optional<Universe>& universe = std::nullopt);

std::vector<GroupRoster> load_rosters(const std::string& path);
void write_rosters(const std::string& path, std::span<const GroupRoster> rosters);

// `event_id TAB timestamp TAB v1,...,vk` per line.
EventCatalog load_events(const std::string& path, const ContextSchema& schema,
                         std::size_t n_events);
void write_events(const std::string& path, const EventCatalog& catalog,
                  std::span<const std::int64_t> timestamps);

WordVectors load_word_vectors(const std::string& path);
// `event_id TAB free text`, split on whitespace.
std::map<std::uint32_t, std::vector<std::string>> load_event_text(const std::string& path);

std::string actor_label(ActorKind kind, std::uint32_t id);

}  // namespace acger
