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

#include "acger/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "acger/digest.hpp"
#include "acger/error.hpp"
#include "json.hpp"

namespace acger {

namespace {

static_assert(std::endian::native == std::endian::little,
              "checkpoint payload is written in host order");

using nlohmann::json;

constexpr const char* kMagic = "ACGER-CHECKPOINT 1";

json variant_json(const VariantConfig& v) {
  return json{{"context", std::string(to_string(v.context))},
              {"aggregation", std::string(to_string(v.aggregation))},
              {"preference", std::string(to_string(v.preference))},
              {"individual_task", v.individual_task}};
}

VariantConfig variant_from(const json& j) {
  VariantConfig v;
  v.context = parse_context_weighting(j.at("context").get<std::string>());
  v.aggregation = parse_aggregation(j.at("aggregation").get<std::string>());
  v.preference = parse_preference(j.at("preference").get<std::string>());
  v.individual_task = j.at("individual_task").get<bool>();
  return v;
}

json header_json(const Model& model) {
  const ModelConfig& c = model.config();
  json schema = json::array();
  for (const auto& f : c.schema.factors()) {
    schema.push_back(json{{"name", f.name},
                          {"kind", std::string(factor_kind_name(f.kind))},
                          {"cardinality", f.cardinality}});
  }
  json rosters = json::array();
  for (const auto& r : model.rosters()) {
    rosters.push_back(json{{"group", r.group_id}, {"members", r.members}});
  }
  json events = json::array();
  const EventCatalog& cat = model.catalog();
  for (std::uint32_t e = 0; e < cat.size(); ++e) {
    if (cat.known(e)) events.push_back(json{e, cat.context(e)});
  }
  json slots = json::array();
  const ModelParams& p = model.params();
  for (SlotId s = 0; s < p.size(); ++s) {
    slots.push_back(json{{"name", p[s].name},
                         {"rows", p[s].value.rows()},
                         {"cols", p[s].value.cols()}});
  }
  return json{{"dim", c.dims.dim},
              {"hidden", c.dims.hidden},
              {"fm_rank", c.dims.fm_rank},
              {"share_fm", c.share_fm},
              {"schema", schema},
              {"schema_hash", schema_hash(c.schema)},
              {"universe",
               json{{"users", c.universe.users},
                    {"events", c.universe.events},
                    {"groups", c.universe.groups}}},
              {"variant", variant_json(c.variant)},
              {"rosters", rosters},
              {"event_contexts", events},
              {"slots", slots},
              {"expertise_count", model.expertise().size()}};
}

void read_doubles(std::istream& in, double* out, std::size_t n, const std::string& path) {
  in.read(reinterpret_cast<char*>(out), static_cast<std::streamsize>(n * sizeof(double)));
  if (static_cast<std::size_t>(in.gcount()) != n * sizeof(double)) {
    throw_data(path + ": truncated checkpoint payload");
  }
}

}  // namespace

std::string schema_hash(const ContextSchema& schema) { return sha256_hex(schema.canonical()); }

void save_checkpoint(const Model& model, const std::string& path) {
  const std::string header = header_json(model).dump();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("cannot write " + path);
  out << kMagic << '\n' << header.size() << '\n' << header << '\n';
  const ModelParams& p = model.params();
  for (SlotId s = 0; s < p.size(); ++s) {
    const DenseMatrix& v = p[s].value;
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(v.size() * sizeof(double)));
  }
  const auto& ex = model.expertise();
  out.write(reinterpret_cast<const char*>(ex.data()),
            static_cast<std::streamsize>(ex.size() * sizeof(double)));
  out.flush();
  if (!out) throw_io("write failed: " + path);
}

Model load_checkpoint(const std::string& path, const ContextSchema* expected_schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("cannot open " + path);
  std::string magic, length_line;
  if (!std::getline(in, magic) || magic != kMagic) {
    throw_data(path + ": not a checkpoint file");
  }
  if (!std::getline(in, length_line)) throw_data(path + ": missing header length");
  std::size_t length = 0;
  try {
    length = std::stoull(length_line);
  } catch (const std::exception&) {
    throw_data(path + ": bad header length");
  }
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (static_cast<std::size_t>(in.gcount()) != length || in.get() != '\n') {
    throw_data(path + ": truncated checkpoint header");
  }

  ModelConfig config;
  std::vector<GroupRoster> rosters;
  EventCatalog catalog;
  std::size_t expertise_count = 0;
  json h;
  try {
    h = json::parse(text);
    config.dims.dim = h.at("dim").get<std::size_t>();
    config.dims.hidden = h.at("hidden").get<std::vector<std::size_t>>();
    config.dims.fm_rank = h.at("fm_rank").get<std::size_t>();
    config.share_fm = h.at("share_fm").get<bool>();
    std::vector<ContextFactor> factors;
    for (const auto& f : h.at("schema")) {
      factors.push_back(ContextFactor{f.at("name").get<std::string>(),
                                      parse_factor_kind(f.at("kind").get<std::string>()),
                                      f.at("cardinality").get<std::size_t>()});
    }
    config.schema = ContextSchema(std::move(factors));
    const auto& u = h.at("universe");
    config.universe = Universe{u.at("users").get<std::size_t>(), u.at("events").get<std::size_t>(),
                               u.at("groups").get<std::size_t>()};
    config.variant = variant_from(h.at("variant"));
    for (const auto& r : h.at("rosters")) {
      rosters.push_back(GroupRoster{r.at("group").get<std::uint32_t>(),
                                    r.at("members").get<std::vector<std::uint32_t>>()});
    }
    catalog = EventCatalog(config.universe.events);
    for (const auto& e : h.at("event_contexts")) {
      catalog.set(e.at(0).get<std::uint32_t>(), e.at(1).get<ContextTuple>());
    }
    expertise_count = h.at("expertise_count").get<std::size_t>();
  } catch (const json::exception& ex) {
    throw_data(path + ": malformed checkpoint header: " + ex.what());
  }

  const std::string recorded = h.at("schema_hash").get<std::string>();
  if (recorded != schema_hash(config.schema)) {
    throw_data(path + ": schema hash does not match the recorded schema");
  }
  if (expected_schema && schema_hash(*expected_schema) != recorded) {
    throw_data(path + ": checkpoint schema hash " + recorded.substr(0, 12) +
               " does not match the data schema");
  }

  ModelParams params;
  register_params(config, params);
  const auto& slots = h.at("slots");
  if (slots.size() != params.size()) {
    throw_data(path + ": checkpoint has " + std::to_string(slots.size()) +
               " slots, configuration expects " + std::to_string(params.size()));
  }
  for (SlotId s = 0; s < params.size(); ++s) {
    const auto& rec = slots[s];
    DenseMatrix& v = params[s].value;
    if (rec.at("name").get<std::string>() != params[s].name ||
        rec.at("rows").get<std::size_t>() != v.rows() ||
        rec.at("cols").get<std::size_t>() != v.cols()) {
      throw_data(path + ": slot " + params[s].name + " shape mismatch (expected " +
                 shape_string(v) + ")");
    }
    read_doubles(in, v.data(), v.size(), path);
  }
  std::vector<double> expertise(expertise_count);
  read_doubles(in, expertise.data(), expertise.size(), path);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw_data(path + ": trailing bytes after checkpoint payload");
  }
  return Model(std::move(config), std::move(params), rosters, std::move(catalog),
               std::move(expertise));
}

}  // namespace acger
