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

#include "acger/data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "acger/error.hpp"
#include "text_io.hpp"

namespace acger {

namespace {

std::string where(const std::string& path, std::size_t line) {
  return path + ":" + std::to_string(line) + ": ";
}

std::int64_t days_from_civil(int year, int month, int day) {
  using namespace std::chrono;
  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok()) {
    throw_data("invalid calendar date " + std::to_string(year) + "-" +
               std::to_string(month) + "-" + std::to_string(day));
  }
  return sys_days{ymd}.time_since_epoch().count();
}

}  // namespace

std::string_view factor_kind_name(FactorKind kind) {
  switch (kind) {
    case FactorKind::categorical:
      return "categorical";
    case FactorKind::time_slot:
      return "time";
    case FactorKind::content:
      return "content";
  }
  return "categorical";
}

FactorKind parse_factor_kind(std::string_view s) {
  if (s == "categorical") return FactorKind::categorical;
  if (s == "time" || s == "time-slot" || s == "time_slot") return FactorKind::time_slot;
  if (s == "content") return FactorKind::content;
  throw_data("unknown factor kind '" + std::string(s) + "'");
}

ContextSchema::ContextSchema(std::vector<ContextFactor> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) {
    throw_data("schema declares no contextual factors");
  }
  std::set<std::string> names;
  for (const auto& f : factors_) {
    if (f.name.empty()) {
      throw_data("schema factor with empty name");
    }
    if (!names.insert(f.name).second) {
      throw_data("schema factor '" + f.name + "' declared twice");
    }
    if (f.cardinality < 1) {
      throw_data("schema factor '" + f.name + "' needs cardinality >= 1");
    }
    if (f.kind == FactorKind::time_slot && f.cardinality != kTimeSlots) {
      throw_data("time factor '" + f.name + "' must have cardinality 168");
    }
  }
}

std::optional<std::size_t> ContextSchema::time_factor() const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::time_slot) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> ContextSchema::content_factor() const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::content) return i;
  }
  return std::nullopt;
}

void ContextSchema::validate(std::span<const std::uint32_t> values) const {
  if (values.size() != factors_.size()) {
    throw_data("context has " + std::to_string(values.size()) + " values, schema has " +
               std::to_string(factors_.size()) + " factors");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= factors_[i].cardinality) {
      throw_data("context value " + std::to_string(values[i]) + " out of range for factor '" +
                 factors_[i].name + "' (cardinality " +
                 std::to_string(factors_[i].cardinality) + ")");
    }
  }
}

std::string ContextSchema::canonical() const {
  std::ostringstream os;
  for (const auto& f : factors_) {
    os << f.name << '\t' << factor_kind_name(f.kind) << '\t' << f.cardinality << '\n';
  }
  return os.str();
}

void EventCatalog::set(std::uint32_t e, ContextTuple ctx) {
  if (e >= contexts_.size()) {
    contexts_.resize(e + 1);
    known_.resize(e + 1, 0);
  }
  contexts_[e] = std::move(ctx);
  known_[e] = 1;
}

std::size_t encode_time_slot(int year, int month, int day, int hour) {
  if (hour < 0 || hour > 23) {
    throw_data("invalid hour " + std::to_string(hour));
  }
  const std::int64_t days = days_from_civil(year, month, day);
  return encode_time_slot(days * 86400 + hour * 3600);
}

std::size_t encode_time_slot(std::int64_t wall_seconds) {
  std::int64_t days = wall_seconds / 86400;
  std::int64_t rem = wall_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  // 1970-01-01 was a Thursday, weekday index 3 with Monday = 0.
  const std::int64_t weekday = ((days + 3) % 7 + 7) % 7;
  const std::int64_t hour = rem / 3600;
  return static_cast<std::size_t>(weekday * 24 + hour);
}

ParsedTime parse_iso8601(std::string_view text) {
  auto fail = [&]() -> ParsedTime { throw_data("malformed timestamp '" + std::string(text) + "'"); };
  auto num = [&](std::size_t pos, std::size_t len) {
    if (pos + len > text.size()) fail();
    int v = 0;
    auto r = std::from_chars(text.data() + pos, text.data() + pos + len, v);
    if (r.ec != std::errc() || r.ptr != text.data() + pos + len) fail();
    return v;
  };
  if (text.size() < 16 || text[4] != '-' || text[7] != '-' || (text[10] != 'T' && text[10] != ' ') ||
      text[13] != ':') {
    fail();
  }
  const int year = num(0, 4);
  const int month = num(5, 2);
  const int day = num(8, 2);
  const int hour = num(11, 2);
  const int minute = num(14, 2);
  int second = 0;
  std::size_t pos = 16;
  if (pos < text.size() && text[pos] == ':') {
    second = num(pos + 1, 2);
    pos += 3;
  }
  if (hour > 23 || minute > 59 || second > 60) fail();
  std::int64_t offset = 0;
  if (pos < text.size()) {
    if (text[pos] == 'Z' && pos + 1 == text.size()) {
      offset = 0;
    } else if ((text[pos] == '+' || text[pos] == '-') && pos + 6 == text.size() &&
               text[pos + 3] == ':') {
      const int oh = num(pos + 1, 2);
      const int om = num(pos + 4, 2);
      offset = (text[pos] == '-' ? -1 : 1) * (oh * 3600 + om * 60);
    } else {
      fail();
    }
  }
  const std::int64_t wall =
      days_from_civil(year, month, day) * 86400 + hour * 3600 + minute * 60 + second;
  return ParsedTime{wall - offset, encode_time_slot(wall)};
}

std::string format_iso8601(std::int64_t utc_seconds) {
  using namespace std::chrono;
  std::int64_t days = utc_seconds / 86400;
  std::int64_t rem = utc_seconds % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

DenseVector build_content_vector(std::span<const std::string> words, const WordVectors& vectors,
                                 std::uint32_t event_id, std::size_t dim) {
  DenseVector sum(dim, 0.0);
  std::size_t matched = 0;
  for (const auto& w : words) {
    auto it = vectors.find(w);
    if (it == vectors.end()) continue;
    if (it->second.size() != dim) {
      throw_data("word vector for '" + w + "' has length " + std::to_string(it->second.size()) +
                 ", expected " + std::to_string(dim));
    }
    axpy(1.0, it->second.span(), sum.span());
    ++matched;
  }
  if (matched == 0) {
    Rng rng(0x5eed0000ULL + event_id);
    std::normal_distribution<double> normal(0.0, 0.1);
    for (double& v : sum) v = normal(rng);
    return sum;
  }
  for (double& v : sum) v /= static_cast<double>(matched);
  return sum;
}

DatasetSplit temporal_split(std::vector<Interaction> interactions) {
  if (interactions.empty()) {
    throw_data("cannot split an empty interaction list");
  }
  std::stable_sort(interactions.begin(), interactions.end(),
                   [](const Interaction& a, const Interaction& b) {
                     if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                     if (a.event_id != b.event_id) return a.event_id < b.event_id;
                     return a.actor_id < b.actor_id;
                   });
  const std::size_t n = interactions.size();
  // Integer ceilings: ceil(0.8n) = ceil(4n/5), ceil(0.1n) = ceil(n/10).
  const std::size_t n_train = (4 * n + 4) / 5;
  const std::size_t n_val = std::min(n - n_train, (n + 9) / 10);
  DatasetSplit split;
  auto first = interactions.begin();
  split.train.assign(std::make_move_iterator(first),
                     std::make_move_iterator(first + static_cast<std::ptrdiff_t>(n_train)));
  split.validation.assign(
      std::make_move_iterator(first + static_cast<std::ptrdiff_t>(n_train)),
      std::make_move_iterator(first + static_cast<std::ptrdiff_t>(n_train + n_val)));
  split.test.assign(std::make_move_iterator(first + static_cast<std::ptrdiff_t>(n_train + n_val)),
                    std::make_move_iterator(interactions.end()));
  return split;
}

std::uint32_t sample_negative(std::span<const std::uint32_t> interacted_sorted,
                              std::size_t universe, Rng& rng) {
  // Count distinct in-range positives.
  std::size_t blocked = 0;
  for (std::size_t i = 0; i < interacted_sorted.size(); ++i) {
    if (interacted_sorted[i] < universe &&
        (i == 0 || interacted_sorted[i] != interacted_sorted[i - 1])) {
      ++blocked;
    }
  }
  if (blocked >= universe) {
    throw_data("no negative available");
  }
  auto is_positive = [&](std::uint32_t e) {
    return std::binary_search(interacted_sorted.begin(), interacted_sorted.end(), e);
  };
  if (2 * blocked <= universe) {
    std::uniform_int_distribution<std::uint64_t> pick(0, universe - 1);
    for (;;) {
      const auto e = static_cast<std::uint32_t>(pick(rng));
      if (!is_positive(e)) return e;
    }
  }
  // Dense positives: pick the j-th free id directly.
  std::uniform_int_distribution<std::uint64_t> pick(0, universe - blocked - 1);
  std::uint64_t j = pick(rng);
  for (std::uint32_t e = 0; e < universe; ++e) {
    if (is_positive(e)) continue;
    if (j == 0) return e;
    --j;
  }
  throw_data("no negative available");
}

std::uint32_t sample_negative_from(std::span<const std::uint32_t> pool_sorted,
                                   std::span<const std::uint32_t> interacted_sorted, Rng& rng) {
  auto is_positive = [&](std::uint32_t e) {
    return std::binary_search(interacted_sorted.begin(), interacted_sorted.end(), e);
  };
  std::size_t blocked = 0;
  for (std::uint32_t e : pool_sorted) blocked += is_positive(e) ? 1 : 0;
  if (blocked >= pool_sorted.size()) {
    throw_data("no negative available");
  }
  const std::size_t n = pool_sorted.size();
  if (2 * blocked <= n) {
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (;;) {
      const std::uint32_t e = pool_sorted[pick(rng)];
      if (!is_positive(e)) return e;
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - blocked - 1);
  std::size_t j = pick(rng);
  for (std::uint32_t e : pool_sorted) {
    if (is_positive(e)) continue;
    if (j == 0) return e;
    --j;
  }
  throw_data("no negative available");
}

ContextSchema load_schema(const std::string& path) {
  LineReader reader(path);
  std::vector<ContextFactor> factors;
  std::string_view line;
  while (reader.next(line)) {
    auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw_data(where(path, reader.line_number()) + "expected `name TAB kind TAB cardinality`");
    }
    ContextFactor f;
    f.name = std::string(cols[0]);
    f.kind = parse_factor_kind(cols[1]);
    f.cardinality = parse_uint(cols[2], where(path, reader.line_number()) + "cardinality");
    factors.push_back(std::move(f));
  }
  try {
    return ContextSchema(std::move(factors));
  } catch (const Error& e) {
    throw_data(path + ": " + e.what());
  }
}

void write_schema(const std::string& path, const ContextSchema& schema) {
  write_text_file(path, schema.canonical());
}

LoadedInteractions load_interactions(const std::string& path, const ContextSchema& schema) {
  LineReader reader(path, /*keep_comments=*/true);
  LoadedInteractions out;
  Universe inferred;
  std::string_view line;
  const auto time_factor = schema.time_factor();
  const auto content_factor = schema.content_factor();
  while (reader.next(line)) {
    const std::string at = where(path, reader.line_number());
    if (line.front() == '#') {
      Universe declared;
      if (parse_universe_header(line, declared)) {
        out.universe = declared;
        out.universe_declared = true;
      }
      continue;
    }
    auto cols = split_tabs(line);
    if (cols.size() != 5) {
      throw_data(at + "expected 5 tab-separated fields, got " + std::to_string(cols.size()));
    }
    Interaction rec;
    if (cols[0] == "u") {
      rec.actor_kind = ActorKind::user;
    } else if (cols[0] == "g") {
      rec.actor_kind = ActorKind::group;
    } else {
      throw_data(at + "actor kind must be u or g");
    }
    rec.actor_id = parse_u32(cols[1], at + "actor_id");
    rec.event_id = parse_u32(cols[2], at + "event_id");
    ParsedTime t;
    try {
      t = parse_iso8601(cols[3]);
    } catch (const Error& e) {
      throw_data(at + e.what());
    }
    rec.timestamp = t.utc_seconds;
    auto values = split_char(cols[4], ',');
    if (values.size() != schema.size()) {
      throw_data(at + "context has " + std::to_string(values.size()) + " values, schema has " +
                 std::to_string(schema.size()));
    }
    rec.context.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == "auto") {
        if (time_factor && *time_factor == i) {
          rec.context[i] = static_cast<std::uint32_t>(t.slot);
        } else if (content_factor && *content_factor == i) {
          rec.context[i] = rec.event_id;
        } else {
          throw_data(at + "`auto` is only valid for time and content factors, not '" +
                     schema[i].name + "'");
        }
      } else {
        rec.context[i] = parse_u32(values[i], at + "context value of factor '" + schema[i].name + "'");
      }
    }
    try {
      schema.validate(rec.context);
    } catch (const Error& e) {
      throw_data(at + e.what());
    }
    if (rec.actor_kind == ActorKind::user) {
      inferred.users = std::max<std::size_t>(inferred.users, rec.actor_id + 1);
    } else {
      inferred.groups = std::max<std::size_t>(inferred.groups, rec.actor_id + 1);
    }
    inferred.events = std::max<std::size_t>(inferred.events, rec.event_id + 1);
    if (out.universe_declared) {
      if (rec.actor_kind == ActorKind::user && rec.actor_id >= out.universe.users) {
        throw_data(at + "actor_id " + std::to_string(rec.actor_id) + " exceeds declared users");
      }
      if (rec.actor_kind == ActorKind::group && rec.actor_id >= out.universe.groups) {
        throw_data(at + "actor_id " + std::to_string(rec.actor_id) + " exceeds declared groups");
      }
      if (rec.event_id >= out.universe.events) {
        throw_data(at + "event_id " + std::to_string(rec.event_id) + " exceeds declared events");
      }
    }
    out.interactions.push_back(std::move(rec));
  }
  if (out.interactions.empty()) {
    throw_data(path + ": no interactions");
  }
  if (!out.universe_declared) {
    out.universe = inferred;
  }
  return out;
}

void write_interactions(const std::string& path, std::span<const Interaction> interactions,
                        const std::optional<Universe>& universe) {
  std::ostringstream os;
  if (universe) {
    os << "# users=" << universe->users << " events=" << universe->events
       << " groups=" << universe->groups << '\n';
  }
  for (const auto& r : interactions) {
    os << (r.actor_kind == ActorKind::user ? 'u' : 'g') << '\t' << r.actor_id << '\t'
       << r.event_id << '\t' << format_iso8601(r.timestamp) << '\t';
    for (std::size_t i = 0; i < r.context.size(); ++i) {
      if (i) os << ',';
      os << r.context[i];
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

std::vector<GroupRoster> load_rosters(const std::string& path) {
  LineReader reader(path);
  std::vector<GroupRoster> rosters;
  std::set<std::uint32_t> seen;
  std::string_view line;
  while (reader.next(line)) {
    const std::string at = where(path, reader.line_number());
    auto cols = split_tabs(line);
    if (cols.size() != 2) {
      throw_data(at + "expected `group_id TAB u1,u2,...`");
    }
    GroupRoster r;
    r.group_id = parse_u32(cols[0], at + "group_id");
    if (!seen.insert(r.group_id).second) {
      throw_data(at + "group " + std::to_string(r.group_id) + " listed twice");
    }
    for (auto m : split_char(cols[1], ',')) {
      r.members.push_back(parse_u32(m, at + "member id"));
    }
    std::sort(r.members.begin(), r.members.end());
    if (std::adjacent_find(r.members.begin(), r.members.end()) != r.members.end()) {
      throw_data(at + "duplicate member in group " + std::to_string(r.group_id));
    }
    if (r.members.empty()) {
      throw_data(at + "group " + std::to_string(r.group_id) + " has no members");
    }
    rosters.push_back(std::move(r));
  }
  return rosters;
}

void write_rosters(const std::string& path, std::span<const GroupRoster> rosters) {
  std::ostringstream os;
  for (const auto& r : rosters) {
    os << r.group_id << '\t';
    for (std::size_t i = 0; i < r.members.size(); ++i) {
      if (i) os << ',';
      os << r.members[i];
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

EventCatalog load_events(const std::string& path, const ContextSchema& schema,
                         std::size_t n_events) {
  LineReader reader(path);
  EventCatalog catalog(n_events);
  std::string_view line;
  const auto time_factor = schema.time_factor();
  const auto content_factor = schema.content_factor();
  while (reader.next(line)) {
    const std::string at = where(path, reader.line_number());
    auto cols = split_tabs(line);
    if (cols.size() != 3) {
      throw_data(at + "expected `event_id TAB timestamp TAB v1,...,vk`");
    }
    const auto e = parse_u32(cols[0], at + "event_id");
    if (n_events != 0 && e >= n_events) {
      throw_data(at + "event_id " + std::to_string(e) + " out of range");
    }
    ParsedTime t;
    try {
      t = parse_iso8601(cols[1]);
    } catch (const Error& err) {
      throw_data(at + err.what());
    }
    auto values = split_char(cols[2], ',');
    if (values.size() != schema.size()) {
      throw_data(at + "context arity does not match schema");
    }
    ContextTuple ctx(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] == "auto" && time_factor && *time_factor == i) {
        ctx[i] = static_cast<std::uint32_t>(t.slot);
      } else if (values[i] == "auto" && content_factor && *content_factor == i) {
        ctx[i] = e;
      } else {
        ctx[i] = parse_u32(values[i], at + "context value of factor '" + schema[i].name + "'");
      }
    }
    try {
      schema.validate(ctx);
    } catch (const Error& err) {
      throw_data(at + err.what());
    }
    catalog.set(e, std::move(ctx));
  }
  return catalog;
}

void write_events(const std::string& path, const EventCatalog& catalog,
                  std::span<const std::int64_t> timestamps) {
  std::ostringstream os;
  for (std::uint32_t e = 0; e < catalog.size(); ++e) {
    if (!catalog.known(e)) continue;
    os << e << '\t' << format_iso8601(e < timestamps.size() ? timestamps[e] : 0) << '\t';
    const auto& ctx = catalog.context(e);
    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (i) os << ',';
      os << ctx[i];
    }
    os << '\n';
  }
  write_text_file(path, os.str());
}

WordVectors load_word_vectors(const std::string& path) {
  LineReader reader(path);
  WordVectors out;
  std::size_t dim = 0;
  std::string_view line;
  while (reader.next(line)) {
    const std::string at = where(path, reader.line_number());
    auto cols = split_tabs(line);
    if (cols.size() != 2) {
      throw_data(at + "expected `word TAB f1,f2,...`");
    }
    std::vector<double> values;
    for (auto f : split_char(cols[1], ',')) {
      values.push_back(parse_double(f, at + "vector component"));
    }
    if (dim == 0) {
      dim = values.size();
    } else if (values.size() != dim) {
      throw_data(at + "inconsistent vector length " + std::to_string(values.size()) +
                 ", expected " + std::to_string(dim));
    }
    out.insert_or_assign(std::string(cols[0]), DenseVector(std::move(values)));
  }
  return out;
}

std::map<std::uint32_t, std::vector<std::string>> load_event_text(const std::string& path) {
  LineReader reader(path);
  std::map<std::uint32_t, std::vector<std::string>> out;
  std::string_view line;
  while (reader.next(line)) {
    const std::string at = where(path, reader.line_number());
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw_data(at + "expected `event_id TAB text`");
    }
    const auto e = parse_u32(line.substr(0, tab), at + "event_id");
    std::istringstream words{std::string(line.substr(tab + 1))};
    auto& bucket = out[e];
    for (std::string w; words >> w;) {
      bucket.push_back(std::move(w));
    }
  }
  return out;
}

std::string actor_label(ActorKind kind, std::uint32_t id) {
  return (kind == ActorKind::user ? "u:" : "g:") + std::to_string(id);
}

}  // namespace acger
