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

#include "acger/toy.hpp"

#include <optional>
#include <random>

namespace acger {

namespace {

void accumulate(Gradients& into, const Gradients& from) {
  for (SlotId s = 0; s < from.size(); ++s) {
    if (!from.touched(s)) continue;
    const auto src = from.grad(s).span();
    auto dst = into.grad(s).span();
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] += src[i];
    if (from.is_table(s)) {
      for (std::size_t r : from.touched_rows(s)) into.touch_row(s, r);
    } else {
      into.touch(s);
    }
  }
}

}  // namespace

ToyInstance make_toy_instance(const VariantConfig& variant) {
  ToyInstance toy;
  toy.config.dims = ModelDims{8, {12, 10}, 4};
  toy.config.schema = ContextSchema({{"organizer", FactorKind::categorical, 4},
                                     {"venue", FactorKind::categorical, 3},
                                     {"time", FactorKind::time_slot, kTimeSlots}});
  toy.config.universe = Universe{4, 6, 1};
  toy.config.variant = variant;
  toy.rosters = {GroupRoster{0, {0, 1, 2}}};
  toy.catalog = EventCatalog(6);
  const ContextTuple contexts[6] = {{0, 0, 10}, {1, 2, 33}, {2, 1, 57},
                                    {3, 0, 101}, {1, 1, 140}, {0, 2, 7}};
  for (std::uint32_t e = 0; e < 6; ++e) toy.catalog.set(e, contexts[e]);
  toy.data.universe = toy.config.universe;
  toy.data.users.actors = 4;
  toy.data.users.train_positives = {{2}, {}, {}, {}};
  toy.data.users.seen_positives = toy.data.users.train_positives;
  toy.data.groups.actors = 1;
  toy.data.groups.train_positives = {{1}};
  toy.data.groups.seen_positives = toy.data.groups.train_positives;
  toy.data.expertise = {3.0, 1.0, 2.0, 0.0};
  toy.data.train_events = {0, 1, 2, 3, 4, 5};
  toy.user_triple = TrainingTriple{0, 2, 5, contexts[2], contexts[5]};
  toy.group_triple = TrainingTriple{0, 1, 4, contexts[1], contexts[4]};
  return toy;
}

Model make_toy_model(const ToyInstance& toy, std::uint64_t seed) {
  Model model = Model::create(toy.config, toy.rosters, toy.catalog, seed);
  model.set_expertise(toy.data.expertise);
  // Random sign, magnitude uniform in [0.1, 0.5]: no entry sits so close to
  // zero that its gradient drowns in finite-difference round-off.
  Rng rng(seed ^ 0x70795eedULL);
  std::uniform_real_distribution<double> magnitude(0.1, 0.5);
  std::bernoulli_distribution negative(0.5);
  for (SlotId s = 0; s < model.params().size(); ++s) {
    for (double& v : model.params()[s].value.span()) {
      const double m = magnitude(rng);
      v = negative(rng) ? -m : m;
    }
  }
  return model;
}

GradCheckReport toy_gradcheck(std::uint64_t seed, double h, const VariantConfig& variant) {
  const ToyInstance toy = make_toy_instance(variant);
  Model model = make_toy_model(toy, seed);
  TrainConfig cfg;
  cfg.lambda_group = 1e-3;
  cfg.lambda_user = 1e-3;
  Trainer trainer(model, toy.data, cfg);
  const bool group_task = !variant.score_level_aggregation();
  const bool user_task = variant.individual_task || !group_task;
  const LossFn loss = [&](const ModelParams&, Gradients* grads) {
    double total = 0.0;
    if (group_task) {
      total += trainer.batch_objective(ActorKind::group, {&toy.group_triple, 1}, grads);
    }
    if (user_task) {
      // Separate sink so each objective regularizes only what it touches.
      std::optional<Gradients> part;
      if (grads) part.emplace(model.params());
      total += trainer.batch_objective(ActorKind::user, {&toy.user_triple, 1},
                                       part ? &*part : nullptr);
      if (grads) accumulate(*grads, *part);
    }
    return total;
  };
  std::uint64_t pattern = 0;
  trainer.set_pattern_sink(&pattern);
  const RegionFn region = [&pattern] {
    const std::uint64_t p = pattern;
    pattern = 0xcbf29ce484222325ULL;
    return p;
  };
  return grad_check(loss, model.params(), h, 0, seed, region);
}

}  // namespace acger
