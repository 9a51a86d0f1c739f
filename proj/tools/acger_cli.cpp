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

// Command-line front end. Everything goes through the C API.

#include <cstdio>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acger/acger.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int exit_code(acger_status s) {
  switch (s) {
    case ACGER_OK:
      return kExitOk;
    case ACGER_ERR_USAGE:
      return kExitUsage;
    case ACGER_ERR_NUMERIC:
      return kExitNumeric;
    default:
      return kExitData;
  }
}

// Carries a failed status out of a subcommand.
struct Failure {
  acger_status status;
  std::string message;
};

void check(acger_status s) {
  if (s != ACGER_OK) throw Failure{s, acger_last_error()};
}

[[noreturn]] void usage_error(const std::string& message) {
  throw Failure{ACGER_ERR_USAGE, message};
}

template <class T, void (*Destroy)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(p); }
};

using Config = Handle<acger_config, acger_config_destroy>;
using Dataset = Handle<acger_dataset, acger_dataset_destroy>;
using Model = Handle<acger_model, acger_model_destroy>;

std::string config_value(const acger_config* c, const char* key) {
  size_t needed = 0;
  check(acger_config_get(c, key, nullptr, 0, &needed));
  std::string out(needed + 1, '\0');
  check(acger_config_get(c, key, out.data(), out.size(), nullptr));
  out.resize(needed);
  return out;
}

// Flag name -> configuration key, in application order.
struct KeyFlag {
  const char* flag;
  const char* key;
  const char* help;
};

const KeyFlag kDataFlags[] = {
  {"--data-dir", "data_dir", "Directory with interactions.tsv, schema.tsv, rosters.tsv"},
  {"--interactions", "interactions", "Interactions file (overrides the data directory)"},
  {"--schema", "schema", "Context schema file"},
  {"--rosters", "rosters", "Group rosters file"},
  {"--events", "events", "Per-event context file"},
  {"--word-vectors", "word_vectors", "Pretrained word vectors for the content factor"},
  {"--event-text", "event_text", "Event descriptions for the content factor"},
};

const KeyFlag kModelFlags[] = {
  {"--dim", "dim", "Embedding size d"},
  {"--hidden", "hidden", "Hidden layer sizes of the context MLPs, e.g. 48,40"},
  {"--fm-rank", "fm_rank", "Factorization machine rank"},
  {"--share-fm", "share_fm", "One FM head for both tasks (on|off)"},
};

const KeyFlag kTrainFlags[] = {
  {"--epochs", "epochs", "Maximum number of epochs"},
  {"--patience", "patience", "Epochs without improvement before stopping"},
  {"--lr", "lr", "Learning rate"},
  {"--batch", "batch", "Mini-batch size"},
  {"--lambda-group", "lambda_group", "L2 coefficient of the group objective"},
  {"--lambda-user", "lambda_user", "L2 coefficient of the individual objective"},
  {"--optimizer", "optimizer", "adam or sgd"},
  {"--negative-context", "negative_context", "Context of sampled negatives: own or positive"},
  {"--negative-pool", "negative_pool", "Negative candidates: train or all"},
  {"--ns", "ns", "Cutoffs N, e.g. 5,10"},
};

const KeyFlag kVariantFlags[] = {
  {"--variant-context", "variant_context", "full, avg, ain, single_u, single_e or none"},
  {"--variant-aggregation", "variant_aggregation",
   "attention, avg, borda, expertise or most_pleasure"},
  {"--variant-preference", "variant_preference", "both, indirect_only or direct_only"},
  {"--variant-individual-task", "variant_individual_task", "on or off"},
};

const KeyFlag kSynthFlags[] = {
  {"--users", "synth_users", "Number of users"},
  {"--n-events", "synth_events", "Number of events"},
  {"--groups", "synth_groups", "Number of groups"},
  {"--factors", "synth_factors", "name:kind:cardinality,..."},
  {"--group-min", "synth_group_min", "Smallest group"},
  {"--group-max", "synth_group_max", "Largest group"},
  {"--user-interactions", "synth_user_interactions", "Interactions per user"},
  {"--group-interactions", "synth_group_interactions", "Interactions per group"},
  {"--planted-factor", "synth_planted_factor", "Index of the factor carrying the signal"},
  {"--planted-strength", "synth_planted_strength", "Probability of a preference-driven pick"},
  {"--direct-fraction", "synth_direct_fraction", "Share of group events from the group's own taste"},
};

// Options shared by every subcommand plus the per-command key flags.
class Command {
 public:
  Command(CLI::App& parent, const char* name, const char* description)
    : app_(parent.add_subcommand(name, description)) {
    app_->add_option("--config", config_file_, "key = value configuration file");
    app_->add_option("--manifest", manifest_, "Re-run with the configuration of a manifest");
    app_->add_option("--set", sets_, "Extra key=value setting (repeatable)");
    add_key({"--seed", "seed", "Random seed"});
    add_key({"--threads", "threads", "Evaluation threads"});
    add_key({"--out", "out", "Output location"});
  }

  CLI::App* app() { return app_; }

  void add_key(const KeyFlag& f) {
    values_.emplace_back(f.key, std::optional<std::string>{});
    app_->add_option(f.flag, values_.back().second, f.help);
  }
  template <std::size_t N>
  void add_keys(const KeyFlag (&flags)[N]) {
    for (const auto& f : flags) add_key(f);
  }
  void add_variant() {
    app_->add_option("--variant", preset_,
                     "Named variant: ACGER, Avg_ACGER2, AIN_ACGER2, SingleU_ACGER2, "
                     "SingleE_ACGER2, ACGER1_Avg, ACGER1_BC, ACGER1_Exp, ACGER1_MP, "
                     "ACGER_U, ACGER_G, ACGER_Grp, ACGER2");
    add_keys(kVariantFlags);
  }
  void add_checkpoint() { add_key({"--checkpoint", "checkpoint", "Model checkpoint"}); }

  // Config file, then manifest, then the variant preset, then flags.
  void build(Config& cfg) const {
    if (manifest_) {
      char command[64] = {0};
      check(acger_manifest_load(manifest_->c_str(), &cfg.p, command, sizeof command));
      if (app_->get_name() != command) {
        usage_error("manifest " + *manifest_ + " records `" + command + "`, not `" +
                    app_->get_name() + "`");
      }
    } else {
      check(acger_config_create(&cfg.p));
    }
    if (config_file_) check(acger_config_load_file(cfg.p, config_file_->c_str()));
    if (preset_) check(acger_config_set(cfg.p, "variant", preset_->c_str()));
    for (const auto& [key, value] : values_) {
      if (value) check(acger_config_set(cfg.p, key.c_str(), value->c_str()));
    }
    for (const auto& kv : sets_) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) usage_error("--set expects key=value, got '" + kv + "'");
      check(acger_config_set(cfg.p, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
  }

 private:
  CLI::App* app_;
  std::optional<std::string> config_file_;
  std::optional<std::string> manifest_;
  std::optional<std::string> preset_;
  std::vector<std::string> sets_;
  std::list<std::pair<std::string, std::optional<std::string>>> values_;  // stable addresses
};

std::vector<std::string> dataset_inputs(const acger_dataset* d) {
  std::vector<std::string> out;
  for (size_t i = 0; i < acger_dataset_input_count(d); ++i) out.emplace_back(acger_dataset_input(d, i));
  return out;
}

void write_manifest(const acger_config* cfg, const char* command,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, const std::string& path) {
  std::vector<const char*> in, out;
  for (const auto& s : inputs) in.push_back(s.c_str());
  for (const auto& s : outputs) out.push_back(s.c_str());
  check(acger_manifest_write(cfg, command, in.data(), in.size(), out.data(), out.size(),
                             path.c_str()));
}

std::string ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{ACGER_ERR_IO, "cannot create " + dir + ": " + ec.message()};
  return dir;
}

std::vector<size_t> parse_ns(const std::string& text) {
  std::vector<size_t> ns;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      ns.push_back(std::stoul(item));
    } catch (const std::exception&) {
      usage_error("bad cutoff list '" + text + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return ns;
}

std::vector<uint32_t> parse_ids(const std::string& text, const char* what) {
  std::vector<uint32_t> out;
  size_t pos = 0;
  while (true) {
    const size_t comma = text.find(',', pos);
    const std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v > 0xffffffffUL) throw std::invalid_argument(item);
      out.push_back(static_cast<uint32_t>(v));
    } catch (const std::exception&) {
      usage_error(std::string("bad ") + what + " '" + text + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void print_metrics(const char* task, const char* split, const std::vector<acger_metric>& rows,
                   size_t actors) {
  for (const auto& m : rows) {
    std::printf("%s\t%s\tN=%zu\tP=%.6f\tR=%.6f\tNDCG=%.6f\tactors=%zu\n", task, split, m.n,
                m.precision, m.recall, m.ndcg, actors);
  }
}

void load_model(const acger_config* cfg, const acger_dataset* data, Model& model) {
  const std::string ckpt = config_value(cfg, "checkpoint");
  if (ckpt.empty()) usage_error("--checkpoint is required");
  check(acger_model_load(ckpt.c_str(), data, &model.p));
}

// --- subcommands ---------------------------------------------------------------

int run_synth(const Command& cmd) {
  Config cfg;
  cmd.build(cfg);
  const std::string out = config_value(cfg.p, "out");
  if (out.empty()) usage_error("synth needs --out DIR");
  check(acger_synth(cfg.p, ensure_dir(out).c_str()));
  const fs::path dir(out);
  std::vector<std::string> outputs;
  for (const char* f : {"schema.tsv", "interactions.tsv", "rosters.tsv", "events.tsv",
                        "ground_truth.tsv"}) {
    outputs.push_back((dir / f).string());
  }
  write_manifest(cfg.p, "synth", {}, outputs, (dir / "manifest.json").string());
  std::printf("wrote synthetic dataset to %s\n", out.c_str());
  return kExitOk;
}

int run_prepare(const Command& cmd) {
  Config cfg;
  cmd.build(cfg);
  Dataset data;
  check(acger_dataset_load(cfg.p, &data.p));
  size_t needed = 0;
  check(acger_dataset_summary(data.p, nullptr, 0, &needed));
  std::string summary(needed + 1, '\0');
  check(acger_dataset_summary(data.p, summary.data(), summary.size(), nullptr));
  std::fputs(summary.c_str(), stdout);
  const std::string out = config_value(cfg.p, "out");
  if (!out.empty()) {
    check(acger_dataset_write_splits(data.p, ensure_dir(out).c_str()));
    std::vector<std::string> outputs;
    for (const char* task : {"user", "group"}) {
      for (const char* split : {"train", "validation", "test"}) {
        outputs.push_back((fs::path(out) / (std::string(task) + "_" + split + ".tsv")).string());
      }
    }
    write_manifest(cfg.p, "prepare", dataset_inputs(data.p), outputs,
                   (fs::path(out) / "manifest.json").string());
  }
  return kExitOk;
}

int run_train(const Command& cmd) {
  Config cfg;
  cmd.build(cfg);
  double lr = 0.0;
  try {
    lr = std::stod(config_value(cfg.p, "lr"));
  } catch (const std::exception&) {
  }
  if (!(lr > 0.0)) usage_error("--lr must be a positive number");
  Dataset data;
  check(acger_dataset_load(cfg.p, &data.p));
  std::string out = config_value(cfg.p, "out");
  if (out.empty()) out = "acger_run";
  const fs::path dir(ensure_dir(out));
  std::string ckpt = config_value(cfg.p, "checkpoint");
  if (ckpt.empty()) ckpt = (dir / "model.ckpt").string();
  const std::string metrics = (dir / "metrics.tsv").string();
  const std::string test_metrics = (dir / "test_metrics.tsv").string();

  Model model;
  check(acger_model_create(cfg.p, data.p, &model.p));
  acger_train_summary summary{};
  check(acger_model_train(
    model.p, data.p, cfg.p, metrics.c_str(),
    [](const char* row, void*) {
      std::printf("%s\n", row);
      std::fflush(stdout);
    },
    nullptr, &summary));
  check(acger_model_save(model.p, ckpt.c_str()));
  std::printf("best epoch %zu (validation NDCG %.6f), checkpoint %s\n", summary.best_epoch,
              summary.best_score, ckpt.c_str());

  const auto ns = parse_ns(config_value(cfg.p, "ns"));
  const size_t threads = std::stoul(config_value(cfg.p, "threads"));
  std::FILE* f = std::fopen(test_metrics.c_str(), "w");
  if (!f) throw Failure{ACGER_ERR_IO, "cannot write " + test_metrics};
  std::fprintf(f, "# task\tN\tP\tR\tNDCG\tactors\n");
  for (acger_actor_kind task : {ACGER_USER, ACGER_GROUP}) {
    std::vector<acger_metric> rows(ns.size());
    size_t actors = 0;
    const acger_status s = acger_evaluate(model.p, data.p, task, ACGER_TEST, ns.data(),
                                          ns.size(), threads, rows.data(), &actors, nullptr);
    if (s != ACGER_OK) {
      std::fclose(f);
      check(s);
    }
    const char* name = task == ACGER_USER ? "individual" : "group";
    print_metrics(name, "test", rows, actors);
    for (const auto& m : rows) {
      std::fprintf(f, "%s\t%zu\t%.10g\t%.10g\t%.10g\t%zu\n", name, m.n, m.precision, m.recall,
                   m.ndcg, actors);
    }
  }
  std::fclose(f);
  write_manifest(cfg.p, "train", dataset_inputs(data.p), {ckpt, metrics, test_metrics},
                 (dir / "manifest.json").string());
  return kExitOk;
}

int run_evaluate(const Command& cmd, const std::string& split_name, const std::string& task_name,
                 const std::optional<std::string>& details) {
  Config cfg;
  cmd.build(cfg);
  acger_split split = ACGER_TEST;
  if (split_name == "validation") {
    split = ACGER_VALIDATION;
  } else if (split_name != "test") {
    usage_error("--split must be test or validation");
  }
  std::vector<acger_actor_kind> tasks;
  if (task_name == "group" || task_name == "both") tasks.push_back(ACGER_GROUP);
  if (task_name == "individual" || task_name == "user" || task_name == "both") {
    tasks.push_back(ACGER_USER);
  }
  if (tasks.empty()) usage_error("--task must be group, individual or both");
  if (details && tasks.size() != 1) usage_error("--details needs a single --task");

  Dataset data;
  check(acger_dataset_load(cfg.p, &data.p));
  Model model;
  load_model(cfg.p, data.p, model);
  check(acger_model_set_variant(model.p, cfg.p));
  const auto ns = parse_ns(config_value(cfg.p, "ns"));
  const size_t threads = std::stoul(config_value(cfg.p, "threads"));
  std::string report;
  for (acger_actor_kind task : tasks) {
    std::vector<acger_metric> rows(ns.size());
    size_t actors = 0;
    check(acger_evaluate(model.p, data.p, task, split, ns.data(), ns.size(), threads, rows.data(),
                         &actors, details ? details->c_str() : nullptr));
    const char* name = task == ACGER_USER ? "individual" : "group";
    print_metrics(name, split_name.c_str(), rows, actors);
    char line[160];
    for (const auto& m : rows) {
      std::snprintf(line, sizeof line, "%s\t%s\t%zu\t%.10g\t%.10g\t%.10g\t%zu\n", name,
                    split_name.c_str(), m.n, m.precision, m.recall, m.ndcg, actors);
      report += line;
    }
  }
  const std::string out = config_value(cfg.p, "out");
  if (!out.empty()) {
    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw Failure{ACGER_ERR_IO, "cannot write " + out};
    std::fprintf(f, "# task\tsplit\tN\tP\tR\tNDCG\tactors\n%s", report.c_str());
    std::fclose(f);
    std::vector<std::string> inputs = dataset_inputs(data.p);
    inputs.push_back(config_value(cfg.p, "checkpoint"));
    std::vector<std::string> outputs{out};
    if (details) outputs.push_back(*details);
    write_manifest(cfg.p, "evaluate", inputs, outputs, out + ".manifest.json");
  }
  return kExitOk;
}

int run_recommend(const Command& cmd, const std::string& actor,
                  const std::optional<std::string>& context, size_t n,
                  const std::optional<std::string>& candidates) {
  Config cfg;
  cmd.build(cfg);
  acger_actor_kind kind;
  if (actor.rfind("u:", 0) == 0) {
    kind = ACGER_USER;
  } else if (actor.rfind("g:", 0) == 0) {
    kind = ACGER_GROUP;
  } else {
    usage_error("--actor must look like u:ID or g:ID");
  }
  const uint32_t id = parse_ids(actor.substr(2), "actor id").at(0);
  if (n == 0) usage_error("--n must be positive");

  Model model;
  load_model(cfg.p, nullptr, model);
  check(acger_model_set_variant(model.p, cfg.p));
  std::vector<uint32_t> ctx;
  if (context) {
    ctx = parse_ids(*context, "context");
    if (ctx.size() != acger_model_factors(model.p)) {
      usage_error("--context needs " + std::to_string(acger_model_factors(model.p)) +
                  " values, got " + std::to_string(ctx.size()));
    }
  }
  std::vector<uint32_t> cands;
  if (candidates) cands = parse_ids(*candidates, "candidate list");
  std::vector<acger_ranked> ranked(n);
  size_t written = 0;
  check(acger_recommend(model.p, kind, id, context ? ctx.data() : nullptr, ctx.size(),
                        candidates ? cands.data() : nullptr, cands.size(), n, ranked.data(),
                        &written));
  std::string text;
  char line[64];
  for (size_t i = 0; i < written; ++i) {
    std::snprintf(line, sizeof line, "%u\t%.10g\n", ranked[i].event, ranked[i].score);
    text += line;
  }
  std::fputs(text.c_str(), stdout);
  const std::string out = config_value(cfg.p, "out");
  if (!out.empty()) {
    std::FILE* f = std::fopen(out.c_str(), "w");
    if (!f) throw Failure{ACGER_ERR_IO, "cannot write " + out};
    std::fputs(text.c_str(), f);
    std::fclose(f);
    write_manifest(cfg.p, "recommend", {config_value(cfg.p, "checkpoint")}, {out},
                   out + ".manifest.json");
  }
  return kExitOk;
}

int run_gradcheck(const Command& cmd, double h, double tol) {
  Config cfg;
  cmd.build(cfg);
  const uint64_t seed = std::stoull(config_value(cfg.p, "seed"));
  std::vector<acger_slot_check> slots(512);
  size_t count = 0;
  double worst = 0.0;
  check(acger_gradcheck(cfg.p, seed, h, slots.data(), slots.size(), &count, &worst));
  std::printf("# slot\tmax_rel_error\tentries\tkink_skipped\n");
  for (size_t i = 0; i < std::min(count, slots.size()); ++i) {
    std::printf("%s\t%.3e\t%zu\t%zu\n", slots[i].name, slots[i].max_rel_error, slots[i].entries,
                slots[i].skipped);
  }
  const bool ok = worst < tol;
  std::printf("max relative error %.3e (tolerance %.1e): %s\n", worst, tol, ok ? "ok" : "FAILED");
  return ok ? kExitOk : kExitNumeric;
}

int run_dump_attention(const Command& cmd, const std::string& split_name,
                       const std::string& target_name) {
  Config cfg;
  cmd.build(cfg);
  acger_split split;
  if (split_name == "test") {
    split = ACGER_TEST;
  } else if (split_name == "validation") {
    split = ACGER_VALIDATION;
  } else if (split_name == "all") {
    split = ACGER_ALL;
  } else {
    usage_error("--split must be test, validation or all");
  }
  acger_attention target;
  if (target_name == "context") {
    target = ACGER_ATTENTION_CONTEXT;
  } else if (target_name == "members") {
    target = ACGER_ATTENTION_MEMBERS;
  } else {
    usage_error("--target must be context or members");
  }
  Dataset data;
  check(acger_dataset_load(cfg.p, &data.p));
  Model model;
  load_model(cfg.p, data.p, model);
  check(acger_model_set_variant(model.p, cfg.p));
  std::string out = config_value(cfg.p, "out");
  if (out.empty()) out = "attention.tsv";
  std::vector<double> mean(256);
  size_t width = 0, records = 0;
  check(acger_dump_attention(model.p, data.p, split, target, out.c_str(), mean.data(),
                             mean.size(), &width, &records));
  std::printf("wrote %zu records to %s\n", records, out.c_str());
  for (size_t i = 0; i < width; ++i) std::printf("factor %zu\tmean weight %.6f\n", i, mean[i]);
  std::vector<std::string> inputs = dataset_inputs(data.p);
  inputs.push_back(config_value(cfg.p, "checkpoint"));
  write_manifest(cfg.p, "dump-attention", inputs, {out}, out + ".manifest.json");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware group event recommendation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", acger_version());

  Command synth(app, "synth", "Generate a synthetic dataset with planted structure");
  synth.add_keys(kSynthFlags);

  Command prepare(app, "prepare", "Validate a dataset and write its chronological splits");
  prepare.add_keys(kDataFlags);

  Command train(app, "train", "Train a model and write checkpoint, metrics and manifest");
  train.add_keys(kDataFlags);
  train.add_keys(kModelFlags);
  train.add_keys(kTrainFlags);
  train.add_variant();
  train.add_checkpoint();

  std::string split = "test", task = "both";
  std::optional<std::string> details;
  Command evaluate(app, "evaluate", "Full-ranking P@N, R@N and NDCG@N of a checkpoint");
  evaluate.add_keys(kDataFlags);
  evaluate.add_variant();
  evaluate.add_checkpoint();
  evaluate.add_key({"--ns", "ns", "Cutoffs N, e.g. 5,10"});
  evaluate.app()->add_option("--split", split, "test or validation");
  evaluate.app()->add_option("--task", task, "group, individual or both");
  evaluate.app()->add_option("--details", details, "Per-actor ranking file");

  std::string actor;
  std::optional<std::string> context, candidates;
  size_t n = 10;
  Command recommend(app, "recommend", "Top-N events for one user or group");
  recommend.add_variant();
  recommend.add_checkpoint();
  recommend.app()->add_option("--actor", actor, "u:ID or g:ID")->required();
  recommend.app()->add_option("--context", context,
                              "Context values v1,...,vk for every candidate (default: each "
                              "event's own context)");
  recommend.app()->add_option("--candidates", candidates, "Candidate event ids (default: all)");
  recommend.app()->add_option("--n", n, "Number of events");

  double h = 1e-5, tol = 1e-4;
  Command gradcheck(app, "gradcheck", "Finite-difference check of all gradients on a toy instance");
  gradcheck.add_variant();
  gradcheck.app()->add_option("--step", h, "Central-difference step h");
  gradcheck.app()->add_option("--tol", tol, "Relative error tolerance");

  std::string att_split = "test", target = "context";
  Command dump(app, "dump-attention", "Write learned attention weights for a split");
  dump.add_keys(kDataFlags);
  dump.add_variant();
  dump.add_checkpoint();
  dump.app()->add_option("--split", att_split, "test, validation or all");
  dump.app()->add_option("--target", target, "context or members");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*synth.app()) return run_synth(synth);
    if (*prepare.app()) return run_prepare(prepare);
    if (*train.app()) return run_train(train);
    if (*evaluate.app()) return run_evaluate(evaluate, split, task, details);
    if (*recommend.app()) return run_recommend(recommend, actor, context, n, candidates);
    if (*gradcheck.app()) return run_gradcheck(gradcheck, h, tol);
    if (*dump.app()) return run_dump_attention(dump, att_split, target);
  } catch (const Failure& f) {
    std::fprintf(stderr, "acger: %s\n", f.message.c_str());
    if (f.status == ACGER_ERR_USAGE) std::fprintf(stderr, "Run with --help for usage.\n");
    return exit_code(f.status);
  }
  return kExitUsage;
}
