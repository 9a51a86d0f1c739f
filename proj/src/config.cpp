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

#include "acger/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "acger/digest.hpp"
#include "acger/error.hpp"
#include "json.hpp"
#include "text_io.hpp"

namespace acger {

namespace {

enum class Type { text, size, u64, real, flag, size_list, optimizer, negctx, negpool, context,
                  aggregation, preference, factors };

struct KeySpec {
  const char* key;
  const char* fallback;
  Type type;
};

// clang-format off
const KeySpec kKeys[] = {
  {"data_dir", "", Type::text},
  {"interactions", "", Type::text},
  {"schema", "", Type::text},
  {"rosters", "", Type::text},
  {"events", "", Type::text},
  {"word_vectors", "", Type::text},
  {"event_text", "", Type::text},
  {"checkpoint", "", Type::text},
  {"out", "", Type::text},
  {"seed", "42", Type::u64},
  {"threads", "1", Type::size},
  {"epochs", "30", Type::size},
  {"patience", "5", Type::size},
  {"lr", "0.01", Type::real},
  {"batch", "256", Type::size},
  {"lambda_group", "1e-05", Type::real},
  {"lambda_user", "1e-05", Type::real},
  {"optimizer", "adam", Type::optimizer},
  {"adam_beta1", "0.9", Type::real},
  {"adam_beta2", "0.999", Type::real},
  {"adam_eps", "1e-08", Type::real},
  {"negative_context", "own", Type::negctx},
  {"negative_pool", "train", Type::negpool},
  {"ns", "5,10", Type::size_list},
  {"dim", "32", Type::size},
  {"hidden", "48,40", Type::size_list},
  {"fm_rank", "10", Type::size},
  {"share_fm", "on", Type::flag},
  {"variant_context", "full", Type::context},
  {"variant_aggregation", "attention", Type::aggregation},
  {"variant_preference", "both", Type::preference},
  {"variant_individual_task", "on", Type::flag},
  {"synth_users", "200", Type::size},
  {"synth_events", "500", Type::size},
  {"synth_groups", "60", Type::size},
  {"synth_factors", "organizer:categorical:10,venue:categorical:10,time:time_slot:168", Type::factors},
  {"synth_group_min", "2", Type::size},
  {"synth_group_max", "6", Type::size},
  {"synth_user_interactions", "30", Type::size},
  {"synth_group_interactions", "20", Type::size},
  {"synth_planted_factor", "0", Type::size},
  {"synth_planted_strength", "0.9", Type::real},
  {"synth_direct_fraction", "0.2", Type::real},
  {"grad_h", "1e-05", Type::real},
  {"grad_tol", "0.0001", Type::real},
};
// clang-format on

const KeySpec* find_key(std::string_view key) {
  for (const auto& k : kKeys) {
    if (key == k.key) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

bool parse_flag(std::string_view v, const std::string& key) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw_usage(key + ": expected on or off, got '" + std::string(v) + "'");
}

std::vector<ContextFactor> parse_factors(std::string_view text) {
  std::vector<ContextFactor> out;
  for (auto item : split_char(text, ',')) {
    const auto parts = split_char(item, ':');
    if (parts.size() != 3) {
      throw_usage("factor '" + std::string(item) + "' must be name:kind:cardinality");
    }
    ContextFactor f;
    f.name = std::string(parts[0]);
    f.kind = parse_factor_kind(parts[1]);
    f.cardinality = parse_uint(parts[2], "factor cardinality");
    out.push_back(std::move(f));
  }
  return out;
}

void check_value(const KeySpec& spec, std::string_view v) {
  const std::string key = spec.key;
  try {
    switch (spec.type) {
      case Type::text:
        break;
      case Type::size:
      case Type::u64:
        parse_uint(v, key);
        break;
      case Type::real: {
        const double x = parse_double(v, key);
        if (!std::isfinite(x)) throw_usage(key + ": value must be finite");
        break;
      }
      case Type::flag:
        parse_flag(v, key);
        break;
      case Type::size_list:
        parse_size_list(v);
        break;
      case Type::optimizer:
        parse_optimizer(v);
        break;
      case Type::negctx:
        parse_negative_context(v);
        break;
      case Type::negpool:
        parse_negative_pool(v);
        break;
      case Type::context:
        parse_context_weighting(v);
        break;
      case Type::aggregation:
        parse_aggregation(v);
        break;
      case Type::preference:
        parse_preference(v);
        break;
      case Type::factors:
        ContextSchema(parse_factors(v));
        break;
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::usage) throw;
    throw_usage(e.what());
  }
}

}  // namespace

std::vector<std::size_t> parse_size_list(std::string_view text) {
  std::vector<std::size_t> out;
  if (text.empty()) return out;
  for (auto item : split_char(text, ',')) {
    try {
      out.push_back(parse_uint(item, "list entry"));
    } catch (const Error& e) {
      throw_usage(e.what());
    }
  }
  return out;
}

RunConfig::RunConfig() {
  for (const auto& k : kKeys) values_.emplace(k.key, k.fallback);
}

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    v.push_back("variant");
    for (const auto& k : kKeys) v.emplace_back(k.key);
    return v;
  }();
  return names;
}

bool RunConfig::has_key(std::string_view key) const {
  return key == "variant" || find_key(key) != nullptr;
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v = trim(value);
  if (key == "variant") {
    const VariantConfig preset = variant_preset(v);
    values_["variant_context"] = std::string(to_string(preset.context));
    values_["variant_aggregation"] = std::string(to_string(preset.aggregation));
    values_["variant_preference"] = std::string(to_string(preset.preference));
    values_["variant_individual_task"] = preset.individual_task ? "on" : "off";
    return;
  }
  const KeySpec* spec = find_key(key);
  if (!spec) throw_usage("unknown configuration key '" + std::string(key) + "'");
  check_value(*spec, v);
  values_[spec->key] = v;
}

const std::string& RunConfig::get(std::string_view key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw_usage("unknown configuration key '" + std::string(key) + "'");
  return it->second;
}

void RunConfig::load_file(const std::string& path) {
  LineReader reader(path);
  std::string_view line;
  while (reader.next(line)) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw_usage(path + ":" + std::to_string(reader.line_number()) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    try {
      set(key, line.substr(eq + 1));
    } catch (const Error& e) {
      throw_usage(path + ":" + std::to_string(reader.line_number()) + ": " + e.what());
    }
  }
}

std::string RunConfig::dump() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

std::size_t RunConfig::get_size(std::string_view key) const {
  return static_cast<std::size_t>(parse_uint(get(key), std::string(key)));
}

double RunConfig::get_double(std::string_view key) const {
  return parse_double(get(key), std::string(key));
}

std::uint64_t RunConfig::get_u64(std::string_view key) const {
  return parse_uint(get(key), std::string(key));
}

TrainConfig RunConfig::train_config() const {
  TrainConfig c;
  c.lr = get_double("lr");
  c.batch = get_size("batch");
  c.lambda_group = get_double("lambda_group");
  c.lambda_user = get_double("lambda_user");
  c.epochs = get_size("epochs");
  c.patience = get_size("patience");
  c.seed = get_u64("seed");
  c.optimizer = parse_optimizer(get("optimizer"));
  c.adam_beta1 = get_double("adam_beta1");
  c.adam_beta2 = get_double("adam_beta2");
  c.adam_eps = get_double("adam_eps");
  c.negative_context = parse_negative_context(get("negative_context"));
  c.negative_pool = parse_negative_pool(get("negative_pool"));
  c.threads = get_size("threads");
  c.ns = parse_size_list(get("ns"));
  c.validate();
  return c;
}

ModelDims RunConfig::dims() const {
  ModelDims d;
  d.dim = get_size("dim");
  d.hidden = parse_size_list(get("hidden"));
  d.fm_rank = get_size("fm_rank");
  if (d.dim == 0 || d.fm_rank == 0) throw_usage("dim and fm_rank must be >= 1");
  for (std::size_t h : d.hidden) {
    if (h == 0) throw_usage("hidden layer sizes must be >= 1");
  }
  return d;
}

VariantConfig RunConfig::variant() const {
  VariantConfig v;
  v.context = parse_context_weighting(get("variant_context"));
  v.aggregation = parse_aggregation(get("variant_aggregation"));
  v.preference = parse_preference(get("variant_preference"));
  v.individual_task = parse_flag(get("variant_individual_task"), "variant_individual_task");
  v.validate();
  return v;
}

bool RunConfig::share_fm() const { return parse_flag(get("share_fm"), "share_fm"); }

SynthConfig RunConfig::synth_config() const {
  SynthConfig s;
  s.users = get_size("synth_users");
  s.events = get_size("synth_events");
  s.groups = get_size("synth_groups");
  s.factors = parse_factors(get("synth_factors"));
  s.group_size_min = get_size("synth_group_min");
  s.group_size_max = get_size("synth_group_max");
  s.user_interactions = get_size("synth_user_interactions");
  s.group_interactions = get_size("synth_group_interactions");
  s.planted_factor = get_size("synth_planted_factor");
  s.planted_strength = get_double("synth_planted_strength");
  s.direct_fraction = get_double("synth_direct_fraction");
  s.seed = get_u64("seed");
  s.validate();
  return s;
}

bool RunConfig::has_data() const {
  return !get("data_dir").empty() || !get("interactions").empty();
}

DataPaths RunConfig::data_paths() const {
  if (!has_data()) throw_usage("no data given (use --data-dir or --interactions)");
  DataPaths p;
  if (!get("data_dir").empty()) p = DataPaths::in_directory(get("data_dir"));
  auto override_with = [&](std::string& field, const char* key) {
    if (!get(key).empty()) field = get(key);
  };
  override_with(p.interactions, "interactions");
  override_with(p.schema, "schema");
  override_with(p.rosters, "rosters");
  override_with(p.events, "events");
  override_with(p.word_vectors, "word_vectors");
  override_with(p.event_text, "event_text");
  if (p.schema.empty()) throw_usage("no schema file given (use --schema)");
  return p;
}

void write_manifest(const RunManifest& manifest, const std::string& path) {
  nlohmann::ordered_json j;
  j["command"] = manifest.command;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : manifest.config.values()) cfg[k] = v;
  j["config"] = cfg;
  j["seed"] = manifest.config.get("seed");
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  for (const auto& [p, d] : manifest.inputs) inputs[p] = d;
  j["inputs"] = inputs;
  j["outputs"] = manifest.outputs;
  write_text_file(path, j.dump(2) + "\n");
}

RunManifest load_manifest(const std::string& path, bool verify_inputs) {
  std::ifstream in(path);
  if (!in) throw_io("cannot open " + path);
  RunManifest m;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
    m.command = j.at("command").get<std::string>();
    for (const auto& [k, v] : j.at("config").items()) m.config.set(k, v.get<std::string>());
    for (const auto& [p, d] : j.at("inputs").items()) m.inputs[p] = d.get<std::string>();
    m.outputs = j.at("outputs").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw_data(path + ": malformed manifest: " + e.what());
  }
  if (verify_inputs) {
    for (const auto& [p, digest] : m.inputs) {
      if (sha256_file(p) != digest) {
        throw_data(path + ": input " + p + " changed since the manifest was written");
      }
    }
  }
  return m;
}

}  // namespace acger
