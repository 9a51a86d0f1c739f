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
#include <limits>

#include "acger/error.hpp"
#include "acger/toy.hpp"
#include "acger/training.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace acger;

TEST_SUITE("training") {
  TEST_CASE("pairwise loss") {
    CHECK(bpr_loss(0.7, 0.7) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(bpr_loss(0.0, 0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(bpr_loss(20.0, 0.0) == doctest::Approx(2.0611536e-9).epsilon(1e-7));
    CHECK(bpr_loss(0.0, 20.0) == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(std::isfinite(bpr_loss(0.0, 1e6)));
    CHECK(bpr_loss(1e6, 0.0) >= 0.0);
  }

  TEST_CASE("adam first step moves by the learning rate") {
    ModelParams p;
    const SlotId s = p.add("theta", 1, 2);
    p[s].value(0, 0) = 1.0;
    p[s].value(0, 1) = -1.0;
    TrainConfig cfg;
    cfg.lr = 0.05;
    Optimizer opt(p, cfg);
    Gradients g(p);
    g.touch(s);
    g.grad(s)(0, 0) = 2.0;
    g.grad(s)(0, 1) = -0.5;
    opt.step(p, g);
    CHECK(p[s].value(0, 0) == doctest::Approx(1.0 - 0.05 * 2.0 / (2.0 + 1e-8)).epsilon(1e-14));
    CHECK(p[s].value(0, 1) == doctest::Approx(-1.0 + 0.05 * 0.5 / (0.5 + 1e-8)).epsilon(1e-14));
    CHECK(opt.steps() == 1);
  }

  TEST_CASE("adam leaves untouched rows alone") {
    ModelParams p;
    const SlotId t = p.add("table", 3, 2, SlotKind::table);
    p[t].value.fill(0.5);
    TrainConfig cfg;
    Optimizer opt(p, cfg);
    Gradients g(p);
    g.touch_row(t, 1);
    g.grad(t)(1, 0) = 1.0;
    opt.step(p, g);
    CHECK(p[t].value(0, 0) == 0.5);
    CHECK(p[t].value(2, 1) == 0.5);
    CHECK(p[t].value(1, 0) < 0.5);
  }

  TEST_CASE("one gradient-descent step follows the finite-difference gradient") {
    const ToyInstance toy = make_toy_instance();
    Model model = make_toy_model(toy, 3);
    const ModelParams before = model.params();
    TrainConfig cfg;
    cfg.optimizer = OptimizerKind::sgd;
    cfg.lr = 1e-3;
    cfg.lambda_group = 1e-3;
    Trainer trainer(model, toy.data, cfg);
    const std::span<const TrainingTriple> batch(&toy.group_triple, 1);
    trainer.step(ActorKind::group, batch);

    // Every entry: (old - new) / lr against a central difference of the
    // objective at the old parameters.
    ModelParams& p = model.params();
    const ModelParams after = p;
    p = before;
    constexpr double h = 1e-6;
    double worst = 0.0;
    std::size_t moved = 0;
    for (SlotId s = 0; s < p.size(); ++s) {
      for (std::size_t i = 0; i < p[s].value.size(); ++i) {
        double& x = p[s].value.data()[i];
        const double x0 = x;
        x = x0 + h;
        const double up = trainer.batch_objective(ActorKind::group, batch, nullptr);
        x = x0 - h;
        const double down = trainer.batch_objective(ActorKind::group, batch, nullptr);
        x = x0;
        const double numeric = (up - down) / (2 * h);
        const double implied = (before[s].value.data()[i] - after[s].value.data()[i]) / cfg.lr;
        if (implied != 0.0) ++moved;
        const double scale = std::max({std::abs(numeric), std::abs(implied), 1e-4});
        worst = std::max(worst, std::abs(numeric - implied) / scale);
      }
    }
    CHECK(moved > 100);
    CHECK(worst < 1e-4);
  }

  TEST_CASE("zero learning rate changes nothing") {
    const Dataset ds = testing::dataset_from(generate_synth(testing::small_synth()));
    const PreparedData pd = prepare_data(ds);
    Model model = Model::create(testing::small_model_config(ds), ds.rosters, ds.catalog, 1);
    const ModelParams before = model.params();
    TrainConfig cfg;
    cfg.lr = 0.0;
    cfg.batch = 1 << 20;  // single batch
    Trainer trainer(model, pd, cfg);
    Rng replay = trainer.rng();
    const EpochStats stats = trainer.train_epoch(ActorKind::group);
    CHECK(model.params() == before);

    // Same triples, fresh trainer: the epoch loss is the initial loss.
    Trainer again(model, pd, cfg);
    again.rng() = replay;
    const auto triples = again.sample_triples(ActorKind::group);
    CHECK(stats.total == again.batch_objective(ActorKind::group, triples, nullptr));
  }

  TEST_CASE("non-finite loss is a numeric error") {
    const Dataset ds = testing::dataset_from(generate_synth(testing::small_synth()));
    const PreparedData pd = prepare_data(ds);
    Model model = Model::create(testing::small_model_config(ds), ds.rosters, ds.catalog, 1);
    auto& w0 = model.params()[model.layout().fm_group.w0].value(0, 0);
    w0 = std::numeric_limits<double>::quiet_NaN();
    Trainer trainer(model, pd, TrainConfig{});
    try {
      trainer.train_epoch(ActorKind::group);
      FAIL("expected a numeric error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::numeric);
    }
  }

  TEST_CASE("negatives come from the training period and avoid positives") {
    const Dataset ds = testing::dataset_from(generate_synth(testing::small_synth()));
    const PreparedData pd = prepare_data(ds);
    Model model = Model::create(testing::small_model_config(ds), ds.rosters, ds.catalog, 1);
    Trainer trainer(model, pd, TrainConfig{});
    const auto triples = trainer.sample_triples(ActorKind::user);
    CHECK(triples.size() == pd.users.split.train.size());
    for (const auto& t : triples) {
      const auto& pos = pd.users.train_positives[t.actor];
      CHECK_FALSE(std::binary_search(pos.begin(), pos.end(), t.negative));
      CHECK(std::binary_search(pd.train_events.begin(), pd.train_events.end(), t.negative));
      CHECK(t.negative_context == model.catalog().context(t.negative));
    }
  }

  TEST_CASE("training loop") {
    const Dataset ds = testing::dataset_from(generate_synth(testing::small_synth()));
    const PreparedData pd = prepare_data(ds);
    const ModelConfig mc = testing::small_model_config(ds);

    TrainConfig cfg;
    cfg.epochs = 0;
    Model idle = Model::create(mc, ds.rosters, ds.catalog, 1);
    const ModelParams initial = idle.params();
    const TrainingResult none = run_training(idle, pd, cfg);
    CHECK(none.log.empty());
    CHECK(none.best_epoch == 0);
    CHECK(idle.params() == initial);

    cfg.epochs = 3;
    std::vector<std::string> rows_a, rows_b;
    Model a = Model::create(mc, ds.rosters, ds.catalog, 1);
    Model b = Model::create(mc, ds.rosters, ds.catalog, 1);
    const auto ra = run_training(a, pd, cfg, [&](const EpochLog& r) { rows_a.push_back(format_log_row(r)); });
    run_training(b, pd, cfg, [&](const EpochLog& r) { rows_b.push_back(format_log_row(r)); });
    CHECK(rows_a.size() == 6);
    CHECK(rows_a == rows_b);
    CHECK(a.params() == b.params());
    CHECK(ra.best_epoch >= 1);
    CHECK(ra.best_epoch <= 3);
    CHECK(ra.log[0].task == ActorKind::user);
    CHECK(ra.log[1].task == ActorKind::group);

    Model grp = Model::create(testing::small_model_config(ds, variant_preset("ACGER_Grp")),
                              ds.rosters, ds.catalog, 1);
    const auto rg = run_training(grp, pd, cfg);
    for (const auto& row : rg.log) {
      if (row.task == ActorKind::user) CHECK_FALSE(row.loss.has_value());
      if (row.task == ActorKind::group) CHECK(row.loss.has_value());
    }
  }

  TEST_CASE("log format") {
    const std::vector<std::size_t> ns{5, 10};
    CHECK(metrics_log_header(ns) == "# epoch\ttask\tloss\tP@5\tR@5\tNDCG@5\tP@10\tR@10\tNDCG@10");
    EpochLog row;
    row.epoch = 2;
    row.task = ActorKind::group;
    row.validation.rows = {MetricsAtN{5, 0.2, 0.5, 0.25}};
    CHECK(format_log_row(row) == "2\tgroup\t-\t0.200000\t0.500000\t0.250000");
    row.loss = 0.5;
    CHECK(format_log_row(row) == "2\tgroup\t0.5\t0.200000\t0.500000\t0.250000");
  }

  TEST_CASE("configuration checks") {
    TrainConfig cfg;
    cfg.batch = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = TrainConfig{};
    cfg.lr = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.lr = 0.0;
    CHECK_NOTHROW(cfg.validate());
    CHECK(parse_optimizer("sgd") == OptimizerKind::sgd);
    CHECK_THROWS_AS(parse_negative_pool("future"), Error);
  }
}
