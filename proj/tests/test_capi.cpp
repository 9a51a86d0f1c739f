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

// Exercises the shared library through its C interface only.

#include <cstring>
#include <string>
#include <vector>

#include "acger/acger.h"
#include "doctest.h"
#include "test_util.hpp"

using testing::TempDir;

namespace {

std::string get(const acger_config* c, const char* key) {
  char buf[256];
  REQUIRE(acger_config_get(c, key, buf, sizeof buf, nullptr) == ACGER_OK);
  return buf;
}

void set(acger_config* c, const char* key, const char* value) {
  REQUIRE(acger_config_set(c, key, value) == ACGER_OK);
}

}  // namespace

TEST_SUITE("c-api") {
  TEST_CASE("configuration and errors") {
    CHECK(std::strlen(acger_version()) > 0);
    acger_config* c = nullptr;
    REQUIRE(acger_config_create(&c) == ACGER_OK);
    CHECK(get(c, "dim") == "32");
    set(c, "variant", "ACGER2");
    CHECK(get(c, "variant_context") == "none");
    CHECK(acger_config_set(c, "bogus", "1") == ACGER_ERR_USAGE);
    CHECK(std::string(acger_last_error()).find("bogus") != std::string::npos);
    CHECK(acger_config_set(nullptr, "dim", "4") == ACGER_ERR_USAGE);
    CHECK(acger_config_create(nullptr) == ACGER_ERR_USAGE);

    size_t needed = 0;
    char small[4];
    CHECK(acger_config_dump(c, small, sizeof small, &needed) == ACGER_OK);
    CHECK(needed > sizeof small);
    CHECK(std::strlen(small) == sizeof small - 1);

    acger_dataset* ds = nullptr;
    CHECK(acger_dataset_load(c, &ds) == ACGER_ERR_USAGE);
    set(c, "data_dir", "/nonexistent/acger");
    CHECK(acger_dataset_load(c, &ds) != ACGER_OK);
    CHECK(ds == nullptr);
    acger_config_destroy(c);
    acger_config_destroy(nullptr);
    acger_model_destroy(nullptr);
    acger_dataset_destroy(nullptr);
  }

  TEST_CASE("synthesize, train, persist and query") {
    TempDir dir;
    acger_config* c = nullptr;
    REQUIRE(acger_config_create(&c) == ACGER_OK);
    set(c, "synth_users", "30");
    set(c, "synth_events", "60");
    set(c, "synth_groups", "8");
    set(c, "synth_user_interactions", "8");
    set(c, "synth_group_interactions", "6");
    set(c, "dim", "8");
    set(c, "hidden", "12");
    set(c, "fm_rank", "3");
    set(c, "epochs", "2");
    REQUIRE(acger_synth(c, dir.str().c_str()) == ACGER_OK);
    set(c, "data_dir", dir.str().c_str());

    acger_dataset* ds = nullptr;
    REQUIRE(acger_dataset_load(c, &ds) == ACGER_OK);
    CHECK(acger_dataset_input_count(ds) >= 3);
    double baseline = 0.0;
    REQUIRE(acger_random_baseline(ds, ACGER_GROUP, ACGER_TEST, 5, &baseline) == ACGER_OK);
    CHECK(baseline > 0.0);
    CHECK(baseline < 1.0);

    acger_model* m = nullptr;
    REQUIRE(acger_model_create(c, ds, &m) == ACGER_OK);
    CHECK(acger_model_factors(m) == 3);
    CHECK(acger_model_events(m) == 60);
    int rows = 0;
    acger_train_summary summary{};
    const std::string log = dir.file("metrics.tsv");
    REQUIRE(acger_model_train(m, ds, c, log.c_str(), [](const char*, void* u) { ++*static_cast<int*>(u); },
                              &rows, &summary) == ACGER_OK);
    CHECK(rows == 4);
    CHECK(summary.epochs_run == 2);
    CHECK(testing::read_file(log).rfind("# epoch\ttask\tloss", 0) == 0);

    const std::string ckpt = dir.file("m.ckpt");
    REQUIRE(acger_model_save(m, ckpt.c_str()) == ACGER_OK);
    acger_model* back = nullptr;
    REQUIRE(acger_model_load(ckpt.c_str(), ds, &back) == ACGER_OK);
    const uint32_t ctx[3] = {1, 2, 40};
    for (uint32_t e = 0; e < 60; e += 7) {
      double a = 0, b = 0;
      REQUIRE(acger_score(m, ACGER_GROUP, 1, e, ctx, 3, &a) == ACGER_OK);
      REQUIRE(acger_score(back, ACGER_GROUP, 1, e, ctx, 3, &b) == ACGER_OK);
      CHECK(a == b);
    }
    CHECK(acger_score(m, ACGER_GROUP, 1, 0, ctx, 3, nullptr) == ACGER_ERR_USAGE);
    double s2 = 0;
    CHECK(acger_score(m, ACGER_GROUP, 1, 0, ctx, 2, &s2) == ACGER_ERR_DATA);
    double s = 0;
    CHECK(acger_score(m, ACGER_USER, 999, 0, ctx, 3, &s) == ACGER_ERR_DATA);

    std::vector<acger_ranked> top(5);
    size_t written = 0;
    REQUIRE(acger_recommend(back, ACGER_GROUP, 2, ctx, 3, nullptr, 0, 5, top.data(), &written) == ACGER_OK);
    CHECK(written == 5);
    for (size_t i = 1; i < written; ++i) CHECK(top[i - 1].score >= top[i].score);

    const size_t ns[2] = {5, 10};
    acger_metric metrics[2];
    size_t actors = 0;
    REQUIRE(acger_evaluate(back, ds, ACGER_GROUP, ACGER_TEST, ns, 2, 2, metrics, &actors, nullptr) == ACGER_OK);
    CHECK(actors > 0);
    CHECK(metrics[1].n == 10);
    CHECK(metrics[1].recall >= metrics[0].recall);

    double mean[8];
    size_t width = 0, records = 0;
    REQUIRE(acger_dump_attention(back, ds, ACGER_TEST, ACGER_ATTENTION_CONTEXT, dir.file("att.tsv").c_str(),
                                 mean, 8, &width, &records) == ACGER_OK);
    CHECK(width == 3);
    CHECK(records > 0);
    CHECK(mean[0] + mean[1] + mean[2] == doctest::Approx(1.0));

    const char* inputs[1] = {ckpt.c_str()};
    const std::string manifest = dir.file("manifest.json");
    REQUIRE(acger_manifest_write(c, "train", inputs, 1, nullptr, 0, manifest.c_str()) == ACGER_OK);
    acger_config* replay = nullptr;
    char command[32];
    REQUIRE(acger_manifest_load(manifest.c_str(), &replay, command, sizeof command) == ACGER_OK);
    CHECK(std::string(command) == "train");
    CHECK(get(replay, "epochs") == "2");
    acger_config_destroy(replay);

    acger_model_destroy(back);
    acger_model_destroy(m);
    acger_dataset_destroy(ds);
    acger_config_destroy(c);
  }

  TEST_CASE("gradient check entry point") {
    std::vector<acger_slot_check> slots(256);
    size_t count = 0;
    double worst = 1.0;
    REQUIRE(acger_gradcheck(nullptr, 7, 1e-5, slots.data(), slots.size(), &count, &worst) == ACGER_OK);
    CHECK(count > 50);
    CHECK(worst < 1e-4);
    CHECK(std::string(slots[0].name).size() > 0);
  }
}
