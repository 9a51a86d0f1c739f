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

#include "acger/synthgen.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "acger/error.hpp"

namespace acger {

namespace {

constexpr std::int64_t kYearSeconds = 366 * 86400;

class EventPicker {
 public:
  EventPicker(const SynthData& data, std::size_t factor, std::size_t cardinality)
    : by_value_(cardinality), n_events_(data.universe.events) {
    for (std::uint32_t e = 0; e < n_events_; ++e) {
      by_value_[data.catalog.context(e)[factor]].push_back(e);
    }
  }

  // Distinct event for one actor: from the preferred value's pool with
  // probability strength, else uniform. Falls back to uniform once the pool
  // is used up.
  std::uint32_t pick(std::uint32_t value, double strength, std::vector<std::uint8_t>& taken,
                     Rng& rng) const {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < strength) {
      const auto& pool = by_value_[value];
      std::vector<std::uint32_t> free;
      for (std::uint32_t e : pool) {
        if (!taken[e]) free.push_back(e);
      }
      if (!free.empty()) {
        std::uniform_int_distribution<std::size_t> idx(0, free.size() - 1);
        const std::uint32_t e = free[idx(rng)];
        taken[e] = 1;
        return e;
      }
    }
    std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(n_events_ - 1));
    for (;;) {
      const std::uint32_t e = any(rng);
      if (!taken[e]) {
        taken[e] = 1;
        return e;
      }
    }
  }

 private:
  std::vector<std::vector<std::uint32_t>> by_value_;
  std::size_t n_events_;
};

}  // namespace

void SynthConfig::validate() const {
  if (users == 0 || events == 0 || groups == 0) throw_usage("synth sizes must be >= 1");
  if (factors.empty()) throw_usage("synth needs at least one factor");
  ContextSchema check(factors);
  if (planted_factor >= factors.size()) {
    throw_usage("planted factor " + std::to_string(planted_factor) + " out of range for " +
                std::to_string(factors.size()) + " factors");
  }
  if (factors[planted_factor].kind == FactorKind::time_slot) {
    throw_usage("the planted factor must not be the time factor");
  }
  if (!(planted_strength >= 0.0 && planted_strength <= 1.0)) {
    throw_usage("planted strength must lie in [0, 1]");
  }
  if (!(direct_fraction >= 0.0 && direct_fraction <= 1.0)) {
    throw_usage("direct preference fraction must lie in [0, 1]");
  }
  if (group_size_min == 0 || group_size_min > group_size_max) {
    throw_usage("group size range must satisfy 1 <= min <= max");
  }
  if (group_size_max > users) throw_usage("group size exceeds the number of users");
  if (user_interactions > events || group_interactions > events) {
    throw_usage("interactions per actor exceed the number of events");
  }
  if (user_interactions == 0 && group_interactions == 0) {
    throw_usage("synth would produce no interactions");
  }
  for (const auto& f : factors) {
    if (f.kind == FactorKind::content && f.cardinality != events) {
      throw_usage("a content factor needs one value per event");
    }
  }
}

SynthData generate_synth(const SynthConfig& config) {
  config.validate();
  Rng rng(config.seed);
  SynthData out;
  out.schema = ContextSchema(config.factors);
  out.universe = Universe{config.users, config.events, config.groups};
  out.catalog = EventCatalog(config.events);
  out.event_times.resize(config.events);
  const std::size_t k = config.factors.size();

  std::uniform_int_distribution<std::int64_t> when(0, kYearSeconds / 3600 - 1);
  for (std::uint32_t e = 0; e < config.events; ++e) {
    // Events start on the hour.
    const std::int64_t t = config.year_start + when(rng) * 3600;
    out.event_times[e] = t;
    ContextTuple ctx(k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& f = config.factors[i];
      switch (f.kind) {
        case FactorKind::time_slot:
          ctx[i] = static_cast<std::uint32_t>(encode_time_slot(t));
          break;
        case FactorKind::content:
          ctx[i] = e;
          break;
        case FactorKind::categorical: {
          std::uniform_int_distribution<std::uint32_t> v(0, static_cast<std::uint32_t>(f.cardinality - 1));
          ctx[i] = v(rng);
          break;
        }
      }
    }
    out.catalog.set(e, std::move(ctx));
  }

  const std::size_t planted = config.planted_factor;
  const std::size_t values = config.factors[planted].cardinality;
  std::uniform_int_distribution<std::uint32_t> pref(0, static_cast<std::uint32_t>(values - 1));
  const EventPicker picker(out, planted, values);

  auto record = [&](ActorKind kind, std::uint32_t actor, std::uint32_t e) {
    out.interactions.push_back(
      Interaction{kind, actor, e, out.catalog.context(e), out.event_times[e]});
  };

  out.truth.planted_factor = planted;
  out.truth.planted_strength = config.planted_strength;
  out.truth.user_values.resize(config.users);
  for (std::uint32_t u = 0; u < config.users; ++u) out.truth.user_values[u] = pref(rng);
  std::vector<std::uint8_t> taken(config.events);
  for (std::uint32_t u = 0; u < config.users; ++u) {
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t i = 0; i < config.user_interactions; ++i) {
      record(ActorKind::user, u,
             picker.pick(out.truth.user_values[u], config.planted_strength, taken, rng));
    }
  }

  std::vector<std::uint32_t> all_users(config.users);
  for (std::uint32_t u = 0; u < config.users; ++u) all_users[u] = u;
  std::uniform_int_distribution<std::size_t> size(config.group_size_min, config.group_size_max);
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (std::uint32_t g = 0; g < config.groups; ++g) {
    const std::size_t n = size(rng);
    std::vector<std::uint32_t> members;
    std::sample(all_users.begin(), all_users.end(), std::back_inserter(members), n, rng);
    GroupTruth truth;
    truth.group = g;
    truth.direct_value = pref(rng);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      truth.member_weights.push_back(gamma(rng));
      total += truth.member_weights.back();
    }
    for (double& w : truth.member_weights) w /= total;
    std::discrete_distribution<std::size_t> vote(truth.member_weights.begin(),
                                                 truth.member_weights.end());
    std::fill(taken.begin(), taken.end(), 0);
    for (std::size_t i = 0; i < config.group_interactions; ++i) {
      const std::uint32_t value = coin(rng) < config.direct_fraction
                                    ? truth.direct_value
                                    : out.truth.user_values[members[vote(rng)]];
      record(ActorKind::group, g, picker.pick(value, config.planted_strength, taken, rng));
    }
    out.rosters.push_back(GroupRoster{g, members});
    out.truth.groups.push_back(std::move(truth));
  }
  return out;
}

void write_synth(const SynthData& data, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_io("cannot create " + dir + ": " + ec.message());
  const fs::path d(dir);
  write_schema((d / "schema.tsv").string(), data.schema);
  write_interactions((d / "interactions.tsv").string(), data.interactions, data.universe);
  write_rosters((d / "rosters.tsv").string(), data.rosters);
  write_events((d / "events.tsv").string(), data.catalog, data.event_times);

  const std::string truth_path = (d / "ground_truth.tsv").string();
  std::ofstream os(truth_path, std::ios::trunc);
  if (!os) throw_io("cannot write " + truth_path);
  os << "# planted_factor=" << data.schema[data.truth.planted_factor].name
     << " strength=" << data.truth.planted_strength << '\n';
  os << "# u:ID TAB preferred value | g:ID TAB own value TAB member:weight,...\n";
  for (std::uint32_t u = 0; u < data.truth.user_values.size(); ++u) {
    os << actor_label(ActorKind::user, u) << '\t' << data.truth.user_values[u] << '\n';
  }
  char buf[64];
  for (std::size_t i = 0; i < data.truth.groups.size(); ++i) {
    const auto& g = data.truth.groups[i];
    const auto& members = data.rosters[i].members;
    os << actor_label(ActorKind::group, g.group) << '\t' << g.direct_value << '\t';
    for (std::size_t j = 0; j < members.size(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%u:%.6f", j ? "," : "", members[j], g.member_weights[j]);
      os << buf;
    }
    os << '\n';
  }
  if (!os) throw_io("write failed: " + truth_path);
}

}  // namespace acger
