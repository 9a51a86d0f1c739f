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
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "acger/dataset.hpp"
#include "acger/evaluation.hpp"
#include "acger/model.hpp"

namespace acger {

enum class OptimizerKind { adam, sgd };

// Context a sampled negative is scored under: the event's own catalog
// context, or the context of the positive it is paired with.
enum class NegativeContext { own, positive };

// Events negatives are drawn from: those seen in the training period, or
// the whole universe (which lets later events appear as negatives).
enum class NegativePool { train, all };

std::string_view to_string(OptimizerKind v);
std::string_view to_string(NegativeContext v);
std::string_view to_string(NegativePool v);
OptimizerKind parse_optimizer(std::string_view s);
NegativeContext parse_negative_context(std::string_view s);
NegativePool parse_negative_pool(std::string_view s);

struct TrainConfig {
  double lr = 0.01;
  std::size_t batch = 256;
  double lambda_group = 1e-5;
  double lambda_user = 1e-5;
  std::size_t epochs = 30;
  std::size_t patience = 5;
  std::uint64_t seed = 42;
  OptimizerKind optimizer = OptimizerKind::adam;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  NegativeContext negative_context = NegativeContext::own;
  NegativePool negative_pool = NegativePool::train;
  std::size_t threads = 1;  // evaluation only
  std::vector<std::size_t> ns = {5, 10};

  // A zero learning rate is accepted here (null update); the command line
  // requires it to be positive.
  void validate() const;
};

// -ln σ(pos - neg), computed without overflow.
double bpr_loss(double r_pos, double r_neg);

struct TrainingTriple {
  std::uint32_t actor = 0;
  std::uint32_t positive = 0;
  std::uint32_t negative = 0;
  ContextTuple positive_context;
  ContextTuple negative_context;
};

// Adam (lazy: only touched rows and slots move) or plain gradient descent.
class Optimizer {
 public:
  Optimizer(const ModelParams& params, const TrainConfig& config);
  void step(ModelParams& params, const Gradients& grads);
  std::size_t steps() const noexcept { return t_; }

 private:
  void update(double& theta, double g, double& m, double& v, double c1, double c2) const;

  OptimizerKind kind_;
  double lr_, b1_, b2_, eps_;
  std::size_t t_ = 0;
  std::vector<DenseMatrix> m_;
  std::vector<DenseMatrix> v_;
};

struct EpochStats {
  double bpr = 0.0;    // mean BPR term per triple
  double total = 0.0;  // mean per-triple BPR plus batch regularization
  std::size_t triples = 0;
};

class Trainer {
 public:
  Trainer(Model& model, const PreparedData& data, TrainConfig config);

  // One triple per train positive, negatives freshly drawn, shuffled.
  std::vector<TrainingTriple> sample_triples(ActorKind task);

  // Mean BPR over the batch plus λ times the squared norm of every parameter
  // region the batch touches. With grads, accumulates the gradient of that
  // objective. bpr_mean receives the BPR part alone.
  double batch_objective(ActorKind task, std::span<const TrainingTriple> batch,
                         Gradients* grads, double* bpr_mean = nullptr) const;

  EpochStats train_epoch(ActorKind task);

  // Applies one optimizer step for a fixed batch; returns its objective
  // before the step.
  double step(ActorKind task, std::span<const TrainingTriple> batch);

  const TrainConfig& config() const noexcept { return config_; }
  Rng& rng() noexcept { return rng_; }

  // Forwarded to the graphs built by batch_objective.
  void set_pattern_sink(std::uint64_t* sink) noexcept { pattern_sink_ = sink; }

 private:
  Model& model_;
  const PreparedData& data_;
  TrainConfig config_;
  Rng rng_;
  Optimizer optimizer_;
  Gradients grads_;
  std::uint64_t* pattern_sink_ = nullptr;
};

struct EpochLog {
  std::size_t epoch = 0;
  ActorKind task = ActorKind::user;
  std::optional<double> loss;  // absent when the task was not trained
  MetricTable validation;
};

struct TrainingResult {
  std::vector<EpochLog> log;
  std::size_t best_epoch = 0;  // 0 when no epoch ran
  double best_score = 0.0;     // validation NDCG at the selection cutoff
  std::size_t epochs_run = 0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Alternates individual and group epochs, validates after each epoch and
// keeps the parameters of the best group validation NDCG@10 (user
// validation when there are no group validation actors).
TrainingResult run_training(Model& model, const PreparedData& data, const TrainConfig& config,
                            const EpochCallback& on_epoch = {});

std::string task_name(ActorKind task);
std::string metrics_log_header(std::span<const std::size_t> ns);
std::string format_log_row(const EpochLog& row);

}  // namespace acger
