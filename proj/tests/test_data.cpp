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

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "acger/data.hpp"
#include "acger/dataset.hpp"
#include "acger/error.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace acger;
using testing::TempDir;
using testing::write_file;

namespace {

std::vector<Interaction> records(std::size_t n) {
  std::vector<Interaction> out;
  for (std::size_t i = 0; i < n; ++i) {
    Interaction r;
    r.actor_id = static_cast<std::uint32_t>(i % 3);
    r.event_id = static_cast<std::uint32_t>(i);
    r.timestamp = static_cast<std::int64_t>(1000 * (n - i));  // reverse order on purpose
    out.push_back(r);
  }
  return out;
}

ContextSchema two_factor_schema() {
  return ContextSchema({{"venue", FactorKind::categorical, 4}, {"time", FactorKind::time_slot, 168}});
}

}  // namespace

TEST_SUITE("data-model") {
  TEST_CASE("weekday-hour slots") {
    // 2024-01-01 was a Monday.
    CHECK(parse_iso8601("2024-01-01T00:15:00").slot == 0);
    CHECK(parse_iso8601("2024-01-02T16:42:00").slot == 40);
    CHECK(parse_iso8601("2024-01-07T23:59:00").slot == 167);
    CHECK(encode_time_slot(2024, 1, 2, 16) == 1 * 24 + 16);
    CHECK(encode_time_slot(std::int64_t{0}) == 3 * 24);  // Thursday midnight
    CHECK_THROWS_AS(encode_time_slot(2024, 2, 30, 1), Error);
    CHECK_THROWS_AS(encode_time_slot(2024, 1, 1, 24), Error);
  }

  TEST_CASE("timestamps keep local wall-clock slots and UTC order") {
    const ParsedTime a = parse_iso8601("2024-01-01T23:30:00+02:00");
    CHECK(a.slot == 23);
    CHECK(a.utc_seconds == parse_iso8601("2024-01-01T21:30:00Z").utc_seconds);
    CHECK(format_iso8601(parse_iso8601("2016-02-29T13:05:09Z").utc_seconds) ==
          "2016-02-29T13:05:09Z");
    CHECK_THROWS_AS(parse_iso8601("2024-01-01"), Error);
    CHECK_THROWS_AS(parse_iso8601("2024-01-01T25:00"), Error);
  }

  TEST_CASE("content vector is a token mean") {
    WordVectors v;
    v["a"] = DenseVector{1, 0};
    v["b"] = DenseVector{0, 1};
    std::vector<std::string> ab{"a", "b"};
    CHECK(build_content_vector(ab, v, 0, 2) == DenseVector{0.5, 0.5});
    v["a"] = DenseVector{2, 4};
    std::vector<std::string> a{"a"};
    CHECK(build_content_vector(a, v, 0, 2) == DenseVector{2, 4});
    v["a"] = DenseVector{3, 0};
    v["b"] = DenseVector{0, 3};
    std::vector<std::string> aab{"a", "a", "b"};
    CHECK(build_content_vector(aab, v, 0, 2) == DenseVector{2, 1});
    std::vector<std::string> bad{"a"};
    CHECK_THROWS_AS(build_content_vector(bad, v, 0, 3), Error);
  }

  TEST_CASE("chronological 80/10/10 split") {
    auto s = temporal_split(records(10));
    CHECK(s.train.size() == 8);
    CHECK(s.validation.size() == 1);
    CHECK(s.test.size() == 1);
    for (std::size_t i = 1; i < s.train.size(); ++i) {
      CHECK(s.train[i - 1].timestamp <= s.train[i].timestamp);
    }
    CHECK(s.train.back().timestamp <= s.validation.front().timestamp);
    CHECK(s.validation.back().timestamp <= s.test.front().timestamp);

    s = temporal_split(records(1));
    CHECK(s.train.size() == 1);
    CHECK(s.validation.empty());
    CHECK(s.test.empty());

    s = temporal_split(records(5));
    CHECK(s.train.size() == 4);
    CHECK(s.validation.size() == 1);
    CHECK(s.test.empty());

    CHECK_THROWS_AS(temporal_split({}), Error);
  }

  TEST_CASE("split sizes follow the ceiling rule for every n") {
    for (std::size_t n = 1; n <= 200; ++n) {
      const auto s = temporal_split(records(n));
      const auto train = static_cast<std::size_t>(std::ceil(0.8 * static_cast<double>(n) - 1e-9));
      const auto val = std::min(n - train, static_cast<std::size_t>(std::ceil(0.1 * static_cast<double>(n) - 1e-9)));
      CHECK(s.train.size() == train);
      CHECK(s.validation.size() == val);
      CHECK(s.test.size() == n - train - val);
    }
  }

  TEST_CASE("negative sampling") {
    Rng rng(1);
    const std::vector<std::uint32_t> pos01{0, 1};
    for (int i = 0; i < 20; ++i) CHECK(sample_negative(pos01, 3, rng) == 2);
    CHECK_THROWS_AS(sample_negative(pos01, 2, rng), Error);

    const std::vector<std::uint32_t> pool{2, 5, 9};
    const std::vector<std::uint32_t> pos{5, 9};
    CHECK(sample_negative_from(pool, pos, rng) == 2);
    const std::vector<std::uint32_t> all{2, 5, 9};
    CHECK_THROWS_AS(sample_negative_from(pool, all, rng), Error);
  }

  TEST_CASE("negatives are uniform over the free ids") {
    constexpr std::size_t universe = 10000, draws = 100000;
    std::vector<std::uint32_t> positives;
    for (std::uint32_t i = 0; i < 10; ++i) positives.push_back(i * 997);
    Rng rng(2024);
    std::vector<std::size_t> hits(universe, 0);
    for (std::size_t i = 0; i < draws; ++i) ++hits[sample_negative(positives, universe, rng)];
    const double p = 1.0 / static_cast<double>(universe - positives.size());
    const double mean = draws * p;
    const double sd = std::sqrt(draws * p * (1.0 - p));
    std::size_t outside = 0;
    double chi2 = 0.0;
    for (std::uint32_t e = 0; e < universe; ++e) {
      const bool positive = std::binary_search(positives.begin(), positives.end(), e);
      if (positive) {
        CHECK(hits[e] == 0);
        continue;
      }
      outside += std::abs(static_cast<double>(hits[e]) - mean) > 5.0 * sd ? 1 : 0;
      chi2 += (hits[e] - mean) * (hits[e] - mean) / mean;
    }
    CHECK(outside == 0);
    // dof ~ 9989; mean dof, sd sqrt(2 dof) ~ 141.
    CHECK(chi2 < 9990 + 6 * 141);
  }

  TEST_CASE("schema validation") {
    CHECK_THROWS_AS(ContextSchema(std::vector<ContextFactor>{}), Error);
    CHECK_THROWS_AS(ContextSchema({{"t", FactorKind::time_slot, 24}}), Error);
    CHECK_THROWS_AS(ContextSchema({{"a", FactorKind::categorical, 2}, {"a", FactorKind::categorical, 2}}),
                    Error);
    const ContextSchema s = two_factor_schema();
    CHECK(s.time_factor() == 1u);
    CHECK_FALSE(s.content_factor().has_value());
    const std::vector<std::uint32_t> ok{3, 167};
    s.validate(ok);
    const std::vector<std::uint32_t> bad{4, 0};
    try {
      s.validate(bad);
      FAIL("expected a rejection");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("venue") != std::string::npos);
    }
  }

  TEST_CASE("loading interactions") {
    TempDir dir;
    const ContextSchema schema = two_factor_schema();
    CHECK_THROWS_AS(load_interactions(write_file(dir.file("empty.tsv"), ""), schema), Error);

    auto one = load_interactions(
      write_file(dir.file("one.tsv"), "u\t4\t7\t2024-01-02T16:42:00Z\t2,auto\n"), schema);
    REQUIRE(one.interactions.size() == 1);
    CHECK(one.interactions[0].context == ContextTuple{2, 40});
    CHECK(one.universe == Universe{5, 8, 0});
    CHECK_FALSE(one.universe_declared);

    auto declared = load_interactions(
      write_file(dir.file("decl.tsv"),
                 "# users=10 events=20 groups=3\ng\t1\t7\t2024-01-02T16:42:00Z\t2,40\n"),
      schema);
    CHECK(declared.universe == Universe{10, 20, 3});
    CHECK(declared.universe_declared);

    try {
      load_interactions(write_file(dir.file("bad.tsv"), "u\t0\t0\t2024-01-02T16:42:00Z\t4,0\n"),
                        schema);
      FAIL("expected a rejection");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::data);
      CHECK(std::string(e.what()).find("venue") != std::string::npos);
    }
    CHECK_THROWS_AS(
      load_interactions(write_file(dir.file("arity.tsv"), "u\t0\t0\t2024-01-02T16:42:00Z\t1\n"),
                        schema),
      Error);
    CHECK_THROWS_AS(
      load_interactions(
        write_file(dir.file("over.tsv"), "# users=1 events=1 groups=0\nu\t1\t0\t2024-01-02T16:42:00Z\t1,1\n"),
        schema),
      Error);
  }

  TEST_CASE("file round trips") {
    TempDir dir;
    const ContextSchema schema = two_factor_schema();
    write_schema(dir.file("schema.tsv"), schema);
    CHECK(load_schema(dir.file("schema.tsv")) == schema);

    std::vector<Interaction> recs(2);
    recs[0] = {ActorKind::user, 1, 2, {3, 5}, 1451606400};
    recs[1] = {ActorKind::group, 0, 1, {0, 100}, 1451610000};
    write_interactions(dir.file("i.tsv"), recs, Universe{2, 3, 1});
    auto loaded = load_interactions(dir.file("i.tsv"), schema);
    CHECK(loaded.interactions == recs);
    CHECK(loaded.universe == Universe{2, 3, 1});

    std::vector<GroupRoster> rosters{{0, {0, 1}}, {2, {1}}};
    write_rosters(dir.file("r.tsv"), rosters);
    auto r = load_rosters(dir.file("r.tsv"));
    REQUIRE(r.size() == 2);
    CHECK(r[1].group_id == 2);
    CHECK(r[1].members == std::vector<std::uint32_t>{1});
    CHECK_THROWS_AS(load_rosters(write_file(dir.file("dup.tsv"), "0\t1,1\n")), Error);
  }

  TEST_CASE("dataset cross validation") {
    TempDir dir;
    write_file(dir.file("schema.tsv"), "venue\tcategorical\t4\ntime\ttime\t168\n");
    write_file(dir.file("rosters.tsv"), "0\t0,1\n");
    write_file(dir.file("interactions.tsv"),
               "u\t0\t0\t2024-01-01T10:00:00Z\t1,auto\n"
               "u\t1\t1\t2024-01-02T10:00:00Z\t2,auto\n"
               "g\t0\t1\t2024-01-02T10:00:00Z\t2,auto\n"
               "g\t1\t0\t2024-01-01T10:00:00Z\t1,auto\n");
    // Group 1 has interactions but no roster.
    CHECK_THROWS_AS(load_dataset(DataPaths::in_directory(dir.str()), 4), Error);
    write_file(dir.file("rosters.tsv"), "0\t0,1\n1\t1\n");
    const Dataset ds = load_dataset(DataPaths::in_directory(dir.str()), 4);
    CHECK(ds.universe == Universe{2, 2, 2});
    CHECK(ds.user_interactions.size() == 2);
    CHECK(ds.group_interactions.size() == 2);
    CHECK(ds.catalog.context(1) == ContextTuple{2, 34});
    const PreparedData pd = prepare_data(ds);
    CHECK(pd.expertise.size() == 2);
    CHECK(pd.users.train_positives.size() == 2);
  }
}
