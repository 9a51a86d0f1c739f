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

#include "acger/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "acger/error.hpp"
#include "acger/pipeline.hpp"

namespace acger {

std::string_view to_string(OptimizerKind v) { return v == OptimizerKind::adam ? "adam" : "sgd"; }

std::string_view to_string(NegativeContext v) {
  return v == NegativeContext::own ? "own" : "positive";
}

std::string_view to_string(NegativePool v) { return v == NegativePool::train ? "train" : "all"; }

NegativePool parse_negative_pool(std::string_view s) {
  if (s == "train") return NegativePool::train;
  if (s == "all") return NegativePool::all;
  throw_usage("unknown negative pool '" + std::string(s) + "' (expected train or all)");
}

OptimizerKind parse_optimizer(std::string_view s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw_usage("unknown optimizer '" + std::string(s) + "' (expected adam or sgd)");
}

NegativeContext parse_negative_context(std::string_view s) {
  if (s == "own") return NegativeContext::own;
  if (s == "positive") return NegativeContext::positive;
  throw_usage("unknown negative context '" + std::string(s) + "' (expected own or positive)");
}

void TrainConfig::validate() const {
  if (!std::isfinite(lr) || lr < 0.0) throw_usage("learning rate must be finite and >= 0");
  if (batch == 0) throw_usage("batch size must be >= 1");
  if (!(lambda_group >= 0.0) || !(lambda_user >= 0.0)) {
    throw_usage("regularization coefficients must be >= 0");
  }
  if (patience == 0) throw_usage("patience must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw_usage("adam moment decays must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw_usage("adam epsilon must be > 0");
  if (ns.empty()) throw_usage("at least one cutoff N is required");
  for (std::size_t n : ns) {
    if (n == 0) throw_usage("cutoff N must be positive");
  }
}

double bpr_loss(double r_pos, double r_neg) {
  const double z = r_pos - r_neg;
  // -ln σ(z) = ln(1 + e^{-z})
  return z >= 0.0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
}

Optimizer::Optimizer(const ModelParams& params, const TrainConfig& config)
  : kind_(config.optimizer),
    lr_(config.lr),
    b1_(config.adam_beta1),
    b2_(config.adam_beta2),
    eps_(config.adam_eps) {
  if (kind_ == OptimizerKind::adam) {
    for (SlotId s = 0; s < params.size(); ++s) {
      const auto& v = params[s].value;
      m_.emplace_back(v.rows(), v.cols());
      v_.emplace_back(v.rows(), v.cols());
    }
  }
}

void Optimizer::update(double& theta, double g, double& m, double& v, double c1,
                       double c2) const {
  m = b1_ * m + (1.0 - b1_) * g;
  v = b2_ * v + (1.0 - b2_) * g * g;
  theta -= lr_ * (m / c1) / (std::sqrt(v / c2) + eps_);
}

void Optimizer::step(ModelParams& params, const Gradients& grads) {
  ++t_;
  const double c1 = 1.0 - std::pow(b1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2_, static_cast<double>(t_));
  for (SlotId s = 0; s < params.size(); ++s) {
    if (!grads.touched(s)) continue;
    DenseMatrix& value = params[s].value;
    const DenseMatrix& g = grads.grad(s);
    const std::size_t cols = value.cols();
    auto apply_range = [&](std::size_t begin, std::size_t end) {
      double* theta = value.data();
      const double* gp = g.data();
      if (kind_ == OptimizerKind::sgd) {
        for (std::size_t i = begin; i < end; ++i) theta[i] -= lr_ * gp[i];
      } else {
        double* m = m_[s].data();
        double* v = v_[s].data();
        for (std::size_t i = begin; i < end; ++i) update(theta[i], gp[i], m[i], v[i], c1, c2);
      }
    };
    if (grads.is_table(s)) {
      for (std::size_t r : grads.touched_rows(s)) apply_range(r * cols, (r + 1) * cols);
    } else {
      apply_range(0, value.rows() * cols);
    }
  }
}

Trainer::Trainer(Model& model, const PreparedData& data, TrainConfig config)
  : model_(model),
    data_(data),
    config_(std::move(config)),
    rng_(config_.seed),
    optimizer_(model.params(), config_),
    grads_(model.params()) {
  config_.validate();
  model_.variant().validate();
}

std::vector<TrainingTriple> Trainer::sample_triples(ActorKind task) {
  const TaskData& t = task == ActorKind::user ? data_.users : data_.groups;
  const std::size_t universe = model_.config().universe.events;
  const bool use_pool = config_.negative_pool == NegativePool::train;
  std::vector<TrainingTriple> out;
  out.reserve(t.split.train.size());
  for (const auto& r : t.split.train) {
    TrainingTriple tr;
    tr.actor = r.actor_id;
    tr.positive = r.event_id;
    tr.negative = use_pool ? sample_negative_from(data_.train_events, t.train_positives[r.actor_id], rng_)
                           : sample_negative(t.train_positives[r.actor_id], universe, rng_);
    tr.positive_context = r.context;
    tr.negative_context = config_.negative_context == NegativeContext::own
                            ? model_.catalog().context_or(tr.negative, r.context)
                            : r.context;
    out.push_back(std::move(tr));
  }
  std::shuffle(out.begin(), out.end(), rng_);
  return out;
}

double Trainer::batch_objective(ActorKind task, std::span<const TrainingTriple> batch,
                                Gradients* grads, double* bpr_mean) const {
  if (batch.empty()) throw_usage("empty training batch");
  if (task == ActorKind::group && model_.variant().score_level_aggregation()) {
    throw_usage("score-level aggregation has no trainable group objective");
  }
  std::optional<Gradients> local;
  if (!grads) {
    local.emplace(model_.params());
    grads = &*local;
  }
  const ModelParams& params = model_.params();
  Graph g(params, grads);
  g.set_pattern_sink(pattern_sink_);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double bpr_sum = 0.0;
  for (const auto& t : batch) {
    g.clear();
    Forward fwd(model_, g);
    Graph::Var pos, neg;
    if (task == ActorKind::user) {
      pos = fwd.user_score(t.actor, t.positive, t.positive_context);
      neg = fwd.user_score(t.actor, t.negative, t.negative_context);
    } else {
      pos = fwd.group_score(t.actor, t.positive, t.positive_context);
      neg = fwd.group_score(t.actor, t.negative, t.negative_context);
    }
    const Graph::Var loss = g.neg_log_sigmoid(g.sub(pos, neg));
    bpr_sum += g.scalar(loss);
    g.backward(loss, scale);
  }
  const double bpr = bpr_sum * scale;
  if (bpr_mean) *bpr_mean = bpr;

  const double lambda = task == ActorKind::user ? config_.lambda_user : config_.lambda_group;
  double reg = 0.0;
  for (SlotId s = 0; s < params.size(); ++s) {
    if (!grads->touched(s)) continue;
    const DenseMatrix& value = params[s].value;
    DenseMatrix& grad = grads->grad(s);
    const std::size_t cols = value.cols();
    auto apply_range = [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const double x = value.data()[i];
        reg += x * x;
        grad.data()[i] += 2.0 * lambda * x;
      }
    };
    if (grads->is_table(s)) {
      for (std::size_t r : grads->touched_rows(s)) apply_range(r * cols, (r + 1) * cols);
    } else {
      apply_range(0, value.rows() * cols);
    }
  }
  return bpr + lambda * reg;
}

double Trainer::step(ActorKind task, std::span<const TrainingTriple> batch) {
  grads_.reset();
  const double objective = batch_objective(task, batch, &grads_);
  if (!std::isfinite(objective)) throw_numeric("non-finite training loss");
  optimizer_.step(model_.params(), grads_);
  return objective;
}

EpochStats Trainer::train_epoch(ActorKind task) {
  const auto triples = sample_triples(task);
  if (triples.empty()) {
    throw_data(std::string("empty train split for the ") + task_name(task) + " task");
  }
  EpochStats stats;
  stats.triples = triples.size();
  double bpr_total = 0.0;
  double objective_total = 0.0;
  for (std::size_t begin = 0; begin < triples.size(); begin += config_.batch) {
    const std::size_t end = std::min(triples.size(), begin + config_.batch);
    const std::span<const TrainingTriple> batch(triples.data() + begin, end - begin);
    grads_.reset();
    double bpr = 0.0;
    const double objective = batch_objective(task, batch, &grads_, &bpr);
    if (!std::isfinite(objective)) {
      throw_numeric("non-finite " + task_name(task) + " training loss");
    }
    optimizer_.step(model_.params(), grads_);
    const double count = static_cast<double>(batch.size());
    bpr_total += bpr * count;
    objective_total += objective * count;
  }
  stats.bpr = bpr_total / static_cast<double>(triples.size());
  stats.total = objective_total / static_cast<double>(triples.size());
  return stats;
}

std::string task_name(ActorKind task) { return task == ActorKind::user ? "individual" : "group"; }

std::string metrics_log_header(std::span<const std::size_t> ns) {
  std::string out = "# epoch\ttask\tloss";
  for (std::size_t n : ns) {
    const std::string s = std::to_string(n);
    out += "\tP@" + s + "\tR@" + s + "\tNDCG@" + s;
  }
  return out;
}

std::string format_log_row(const EpochLog& row) {
  char buf[64];
  std::string out = std::to_string(row.epoch) + "\t" + task_name(row.task) + "\t";
  if (row.loss) {
    std::snprintf(buf, sizeof buf, "%.10g", *row.loss);
    out += buf;
  } else {
    out += "-";
  }
  for (const auto& m : row.validation.rows) {
    std::snprintf(buf, sizeof buf, "\t%.6f\t%.6f\t%.6f", m.precision, m.recall, m.ndcg);
    out += buf;
  }
  return out;
}

TrainingResult run_training(Model& model, const PreparedData& data, const TrainConfig& config,
                            const EpochCallback& on_epoch) {
  config.validate();
  const VariantConfig& variant = model.variant();
  variant.validate();
  TrainingResult result;
  if (config.epochs == 0) return result;

  Trainer trainer(model, data, config);
  const std::size_t select_n = std::find(config.ns.begin(), config.ns.end(), 10) != config.ns.end()
                                 ? 10
                                 : *std::max_element(config.ns.begin(), config.ns.end());
  EvalOptions eval;
  eval.ns = config.ns;
  eval.threads = config.threads;

  ModelParams best = model.params();
  double best_score = -std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;
  auto emit = [&](EpochLog row) {
    if (on_epoch) on_epoch(row);
    result.log.push_back(std::move(row));
  };

  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::optional<MetricTable> user_val;
    if (variant.individual_task) {
      EpochLog row{epoch, ActorKind::user, std::nullopt, {}};
      if (!data.users.split.train.empty()) row.loss = trainer.train_epoch(ActorKind::user).bpr;
      row.validation = evaluate(model, data.users, ActorKind::user, EvalSplit::validation, eval);
      user_val = row.validation;
      emit(std::move(row));
    }
    EpochLog grow{epoch, ActorKind::group, std::nullopt, {}};
    if (!variant.score_level_aggregation() && !data.groups.split.train.empty()) {
      grow.loss = trainer.train_epoch(ActorKind::group).bpr;
    }
    grow.validation = evaluate(model, data.groups, ActorKind::group, EvalSplit::validation, eval);
    const MetricTable group_val = grow.validation;
    emit(std::move(grow));
    result.epochs_run = epoch;

    double score = 0.0;
    if (group_val.actors > 0) {
      score = group_val.at(select_n).ndcg;
    } else {
      if (!user_val) {
        user_val = evaluate(model, data.users, ActorKind::user, EvalSplit::validation, eval);
      }
      score = user_val->at(select_n).ndcg;
    }
    if (score > best_score) {
      best_score = score;
      best = model.params();
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= config.patience) {
      break;
    }
  }
  model.params() = std::move(best);
  result.best_score = best_score;
  return result;
}

}  // namespace acger
