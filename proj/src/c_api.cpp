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

#include "acger/acger.h"

#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "acger/checkpoint.hpp"
#include "acger/config.hpp"
#include "acger/digest.hpp"
#include "acger/dataset.hpp"
#include "acger/diagnostics.hpp"
#include "acger/error.hpp"
#include "acger/evaluation.hpp"
#include "acger/scoring.hpp"
#include "acger/synthgen.hpp"
#include "acger/toy.hpp"
#include "acger/training.hpp"

struct acger_config {
  acger::RunConfig config;
};

struct acger_dataset {
  acger::Dataset data;
  acger::PreparedData prepared;
  std::vector<std::string> inputs;
};

struct acger_model {
  explicit acger_model(acger::Model m) : model(std::move(m)) {}
  acger::Model model;
};

namespace {

thread_local std::string g_last_error;

acger_status status_of(acger::ErrorKind kind) {
  switch (kind) {
    case acger::ErrorKind::usage:
      return ACGER_ERR_USAGE;
    case acger::ErrorKind::data:
      return ACGER_ERR_DATA;
    case acger::ErrorKind::numeric:
      return ACGER_ERR_NUMERIC;
    case acger::ErrorKind::io:
      return ACGER_ERR_IO;
  }
  return ACGER_ERR_INTERNAL;
}

template <class F>
acger_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return ACGER_OK;
  } catch (const acger::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ACGER_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ACGER_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) acger::throw_usage(std::string(what) + " must not be NULL");
}

void copy_out(const std::string& s, char* buf, std::size_t cap, std::size_t* needed) {
  if (needed) *needed = s.size();
  if (buf && cap > 0) {
    const std::size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
}

acger::ActorKind actor_kind(acger_actor_kind k) {
  if (k != ACGER_USER && k != ACGER_GROUP) acger::throw_usage("unknown actor kind");
  return k == ACGER_USER ? acger::ActorKind::user : acger::ActorKind::group;
}

const acger::TaskData& task_of(const acger_dataset* d, acger_actor_kind k) {
  return actor_kind(k) == acger::ActorKind::user ? d->prepared.users : d->prepared.groups;
}

acger::EvalSplit eval_split(acger_split s) {
  if (s == ACGER_VALIDATION) return acger::EvalSplit::validation;
  if (s == ACGER_TEST) return acger::EvalSplit::test;
  acger::throw_usage("evaluation needs the validation or test split");
}

std::vector<acger::Interaction> split_records(const acger::TaskData& t, acger_split s) {
  switch (s) {
    case ACGER_VALIDATION:
      return t.split.validation;
    case ACGER_TEST:
      return t.split.test;
    case ACGER_ALL: {
      std::vector<acger::Interaction> all = t.split.train;
      all.insert(all.end(), t.split.validation.begin(), t.split.validation.end());
      all.insert(all.end(), t.split.test.begin(), t.split.test.end());
      return all;
    }
  }
  acger::throw_usage("unknown split");
}

acger::ModelConfig model_config(const acger::RunConfig& rc, const acger::Dataset& d) {
  acger::ModelConfig mc;
  mc.dims = rc.dims();
  mc.schema = d.schema;
  mc.universe = d.universe;
  mc.variant = rc.variant();
  mc.share_fm = rc.share_fm();
  return mc;
}

}  // namespace

extern "C" {

const char* acger_version(void) { return "1.0.0"; }

const char* acger_last_error(void) { return g_last_error.c_str(); }

acger_status acger_config_create(acger_config** out) {
  return guarded([&] {
    require(out, "out");
    *out = new acger_config();
  });
}

void acger_config_destroy(acger_config* config) { delete config; }

acger_status acger_config_set(acger_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    require(value, "value");
    config->config.set(key, value);
  });
}

acger_status acger_config_get(const acger_config* config, const char* key, char* buf,
                              size_t cap, size_t* needed) {
  return guarded([&] {
    require(config, "config");
    require(key, "key");
    copy_out(config->config.get(key), buf, cap, needed);
  });
}

acger_status acger_config_load_file(acger_config* config, const char* path) {
  return guarded([&] {
    require(config, "config");
    require(path, "path");
    config->config.load_file(path);
  });
}

acger_status acger_config_dump(const acger_config* config, char* buf, size_t cap,
                               size_t* needed) {
  return guarded([&] {
    require(config, "config");
    copy_out(config->config.dump(), buf, cap, needed);
  });
}

acger_status acger_manifest_write(const acger_config* config, const char* command,
                                  const char* const* inputs, size_t n_inputs,
                                  const char* const* outputs, size_t n_outputs,
                                  const char* path) {
  return guarded([&] {
    require(config, "config");
    require(command, "command");
    require(path, "path");
    acger::RunManifest m;
    m.command = command;
    m.config = config->config;
    for (size_t i = 0; i < n_inputs; ++i) {
      if (inputs[i] && *inputs[i]) m.inputs[inputs[i]] = acger::sha256_file(inputs[i]);
    }
    for (size_t i = 0; i < n_outputs; ++i) {
      if (outputs[i] && *outputs[i]) m.outputs.emplace_back(outputs[i]);
    }
    acger::write_manifest(m, path);
  });
}

acger_status acger_manifest_load(const char* path, acger_config** out, char* command_buf,
                                 size_t cap) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    acger::RunManifest m = acger::load_manifest(path);
    auto cfg = std::make_unique<acger_config>();
    cfg->config = std::move(m.config);
    copy_out(m.command, command_buf, cap, nullptr);
    *out = cfg.release();
  });
}

acger_status acger_synth(const acger_config* config, const char* out_dir) {
  return guarded([&] {
    require(config, "config");
    require(out_dir, "out_dir");
    const acger::SynthData data = acger::generate_synth(config->config.synth_config());
    acger::write_synth(data, out_dir);
  });
}

acger_status acger_dataset_load(const acger_config* config, acger_dataset** out) {
  return guarded([&] {
    require(config, "config");
    require(out, "out");
    const acger::DataPaths paths = config->config.data_paths();
    auto ds = std::make_unique<acger_dataset>();
    ds->data = acger::load_dataset(paths, config->config.dims().dim);
    ds->prepared = acger::prepare_data(ds->data);
    for (const std::string* p : {&paths.schema, &paths.interactions, &paths.rosters,
                                 &paths.events, &paths.word_vectors, &paths.event_text}) {
      if (!p->empty()) ds->inputs.push_back(*p);
    }
    *out = ds.release();
  });
}

void acger_dataset_destroy(acger_dataset* dataset) { delete dataset; }

acger_status acger_dataset_summary(const acger_dataset* dataset, char* buf, size_t cap,
                                   size_t* needed) {
  return guarded([&] {
    require(dataset, "dataset");
    const auto& d = dataset->data;
    const auto& p = dataset->prepared;
    std::string s;
    s += "users\t" + std::to_string(d.universe.users) + "\n";
    s += "events\t" + std::to_string(d.universe.events) + "\n";
    s += "groups\t" + std::to_string(d.universe.groups) + "\n";
    s += "factors\t" + std::to_string(d.schema.size()) + "\n";
    for (const auto& f : d.schema.factors()) {
      s += "factor\t" + f.name + "\t" + std::string(acger::factor_kind_name(f.kind)) + "\t" +
           std::to_string(f.cardinality) + "\n";
    }
    for (const auto* t : {&p.users, &p.groups}) {
      const std::string name = t == &p.users ? "user" : "group";
      s += name + "_interactions\t" + std::to_string(t->split.train.size()) + "\t" +
           std::to_string(t->split.validation.size()) + "\t" +
           std::to_string(t->split.test.size()) + "\n";
    }
    s += "pretrained_content\t" + std::string(d.pretrained_content ? "yes" : "no") + "\n";
    copy_out(s, buf, cap, needed);
  });
}

size_t acger_dataset_input_count(const acger_dataset* dataset) {
  return dataset ? dataset->inputs.size() : 0;
}

const char* acger_dataset_input(const acger_dataset* dataset, size_t i) {
  return dataset && i < dataset->inputs.size() ? dataset->inputs[i].c_str() : nullptr;
}

acger_status acger_dataset_write_splits(const acger_dataset* dataset, const char* out_dir) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out_dir, "out_dir");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) acger::throw_io(std::string("cannot create ") + out_dir + ": " + ec.message());
    const fs::path dir(out_dir);
    const auto& p = dataset->prepared;
    for (const auto* t : {&p.users, &p.groups}) {
      const std::string name = t == &p.users ? "user" : "group";
      acger::write_interactions((dir / (name + "_train.tsv")).string(), t->split.train);
      acger::write_interactions((dir / (name + "_validation.tsv")).string(), t->split.validation);
      acger::write_interactions((dir / (name + "_test.tsv")).string(), t->split.test);
    }
  });
}

acger_status acger_random_baseline(const acger_dataset* dataset, acger_actor_kind task,
                                   acger_split split, size_t n, double* out) {
  return guarded([&] {
    require(dataset, "dataset");
    require(out, "out");
    if (n == 0) acger::throw_usage("cutoff N must be positive");
    *out = acger::expected_random_ndcg(task_of(dataset, task), dataset->data.universe.events,
                                       eval_split(split), n);
  });
}

acger_status acger_model_create(const acger_config* config, const acger_dataset* dataset,
                                acger_model** out) {
  return guarded([&] {
    require(config, "config");
    require(dataset, "dataset");
    require(out, "out");
    const auto& d = dataset->data;
    acger::Model m = acger::Model::create(model_config(config->config, d), d.rosters, d.catalog,
                                          config->config.get_u64("seed"),
                                          d.pretrained_content ? &*d.pretrained_content : nullptr);
    m.set_expertise(dataset->prepared.expertise);
    *out = new acger_model(std::move(m));
  });
}

void acger_model_destroy(acger_model* model) { delete model; }

acger_status acger_model_train(acger_model* model, const acger_dataset* dataset,
                               const acger_config* config, const char* metrics_path,
                               acger_epoch_fn on_epoch, void* user,
                               acger_train_summary* summary) {
  return guarded([&] {
    require(model, "model");
    require(dataset, "dataset");
    require(config, "config");
    const acger::TrainConfig tc = config->config.train_config();
    std::ofstream log;
    if (metrics_path) {
      log.open(metrics_path, std::ios::trunc);
      if (!log) acger::throw_io(std::string("cannot write ") + metrics_path);
      log << acger::metrics_log_header(tc.ns) << '\n';
    }
    const auto result = acger::run_training(
      model->model, dataset->prepared, tc, [&](const acger::EpochLog& row) {
        const std::string line = acger::format_log_row(row);
        if (log.is_open()) log << line << '\n' << std::flush;
        if (on_epoch) on_epoch(line.c_str(), user);
      });
    if (log.is_open() && !log) acger::throw_io(std::string("write failed: ") + metrics_path);
    if (summary) {
      summary->epochs_run = result.epochs_run;
      summary->best_epoch = result.best_epoch;
      summary->best_score = result.best_score;
    }
  });
}

acger_status acger_model_save(const acger_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    acger::save_checkpoint(model->model, path);
  });
}

acger_status acger_model_load(const char* path, const acger_dataset* dataset,
                              acger_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    acger::Model m = acger::load_checkpoint(path, dataset ? &dataset->data.schema : nullptr);
    if (dataset && !(m.config().universe == dataset->data.universe)) {
      acger::throw_data(std::string(path) + ": checkpoint universe differs from the dataset");
    }
    *out = new acger_model(std::move(m));
  });
}

acger_status acger_model_set_variant(acger_model* model, const acger_config* config) {
  return guarded([&] {
    require(model, "model");
    require(config, "config");
    model->model.set_variant(config->config.variant());
  });
}

size_t acger_model_factors(const acger_model* model) {
  return model ? model->model.factors() : 0;
}

size_t acger_model_events(const acger_model* model) {
  return model ? model->model.config().universe.events : 0;
}

acger_status acger_score(const acger_model* model, acger_actor_kind kind, uint32_t actor,
                         uint32_t event, const uint32_t* context, size_t k, double* out) {
  return guarded([&] {
    require(model, "model");
    require(context, "context");
    require(out, "out");
    const acger::ContextTuple ctx(context, context + k);
    const uint32_t candidate[1] = {event};
    *out = acger::score_candidates(model->model, actor_kind(kind), actor, candidate,
                                   acger::ContextPolicy::fixed(ctx))[0];
  });
}

acger_status acger_recommend(const acger_model* model, acger_actor_kind kind, uint32_t actor,
                             const uint32_t* context, size_t k, const uint32_t* candidates,
                             size_t n_candidates, size_t n, acger_ranked* out,
                             size_t* written) {
  return guarded([&] {
    require(model, "model");
    require(out, "out");
    const acger::Model& m = model->model;
    std::vector<uint32_t> cands;
    if (candidates) {
      cands.assign(candidates, candidates + n_candidates);
    } else {
      for (uint32_t e = 0; e < m.config().universe.events; ++e) cands.push_back(e);
    }
    std::optional<acger::ContextPolicy> policy;
    if (context) {
      acger::ContextTuple ctx(context, context + k);
      m.config().schema.validate(ctx);
      policy = acger::ContextPolicy::fixed(std::move(ctx));
    } else {
      const acger::ContextTuple fallback(m.factors(), 0);
      policy = acger::ContextPolicy::per_event(m.catalog(), fallback);
    }
    acger::ForwardCache cache;
    const auto rec = acger::top_n(m, actor_kind(kind), actor, cands, *policy, n, &cache);
    for (size_t i = 0; i < rec.entries.size(); ++i) {
      out[i] = acger_ranked{rec.entries[i].event, rec.entries[i].score};
    }
    if (written) *written = rec.entries.size();
  });
}

acger_status acger_evaluate(const acger_model* model, const acger_dataset* dataset,
                            acger_actor_kind task, acger_split split, const size_t* ns,
                            size_t n_ns, size_t threads, acger_metric* out, size_t* actors,
                            const char* details_path) {
  return guarded([&] {
    require(model, "model");
    require(dataset, "dataset");
    require(ns, "ns");
    require(out, "out");
    acger::EvalOptions opt;
    opt.ns.assign(ns, ns + n_ns);
    opt.threads = threads;
    std::vector<acger::ActorMetrics> details;
    if (details_path) opt.details = &details;
    const auto table = acger::evaluate(model->model, task_of(dataset, task), actor_kind(task),
                                       eval_split(split), opt);
    for (size_t i = 0; i < table.rows.size(); ++i) {
      const auto& r = table.rows[i];
      out[i] = acger_metric{r.n, r.precision, r.recall, r.ndcg};
    }
    if (actors) *actors = table.actors;
    if (details_path) {
      std::ofstream os(details_path, std::ios::trunc);
      if (!os) acger::throw_io(std::string("cannot write ") + details_path);
      os << "# actor\trelevant\tranked";
      for (size_t n : opt.ns) os << "\tNDCG@" << n;
      os << '\n';
      char buf[32];
      for (const auto& d : details) {
        os << acger::actor_label(actor_kind(task), d.actor) << '\t';
        for (size_t i = 0; i < d.relevant.size(); ++i) os << (i ? "," : "") << d.relevant[i];
        os << '\t';
        for (size_t i = 0; i < d.ranked.size(); ++i) os << (i ? "," : "") << d.ranked[i];
        for (const auto& mt : d.metrics) {
          std::snprintf(buf, sizeof buf, "\t%.6f", mt.ndcg);
          os << buf;
        }
        os << '\n';
      }
      if (!os) acger::throw_io(std::string("write failed: ") + details_path);
    }
  });
}

acger_status acger_dump_attention(const acger_model* model, const acger_dataset* dataset,
                                  acger_split split, acger_attention target, const char* path,
                                  double* mean_out, size_t cap, size_t* width, size_t* records) {
  return guarded([&] {
    require(model, "model");
    require(dataset, "dataset");
    if (target != ACGER_ATTENTION_CONTEXT && target != ACGER_ATTENTION_MEMBERS) {
      acger::throw_usage("unknown attention target");
    }
    auto recs = split_records(dataset->prepared.users, split);
    const auto groups = split_records(dataset->prepared.groups, split);
    recs.insert(recs.end(), groups.begin(), groups.end());
    const auto weights = acger::attention_weights(
      model->model, recs,
      target == ACGER_ATTENTION_CONTEXT ? acger::AttentionTarget::context
                                        : acger::AttentionTarget::members);
    if (path) acger::write_attention(path, weights);
    if (records) *records = weights.size();
    std::vector<double> mean;
    if (target == ACGER_ATTENTION_CONTEXT) mean = acger::mean_weights(weights);
    if (width) *width = mean.size();
    if (mean_out) {
      for (size_t i = 0; i < std::min(cap, mean.size()); ++i) mean_out[i] = mean[i];
    }
  });
}

acger_status acger_gradcheck(const acger_config* config, uint64_t seed, double h,
                             acger_slot_check* out, size_t cap, size_t* count,
                             double* max_rel_error) {
  return guarded([&] {
    const acger::VariantConfig variant = config ? config->config.variant() : acger::VariantConfig{};
    const auto report = acger::toy_gradcheck(seed, h, variant);
    if (count) *count = report.slots.size();
    if (max_rel_error) *max_rel_error = report.max_rel_error();
    if (out) {
      for (size_t i = 0; i < std::min(cap, report.slots.size()); ++i) {
        const auto& s = report.slots[i];
        std::snprintf(out[i].name, sizeof out[i].name, "%s", s.name.c_str());
        out[i].max_rel_error = s.max_rel_error;
        out[i].entries = s.entries_checked;
        out[i].skipped = s.entries_skipped;
      }
    }
  });
}

}  // extern "C"
