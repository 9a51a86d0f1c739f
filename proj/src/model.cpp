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

#include "acger/model.hpp"

#include <algorithm>
#include <random>

#include "acger/error.hpp"

namespace acger {

namespace {

const char* entity_name(std::size_t kind) {
  static const char* names[] = {"user", "event", "group"};
  return names[kind];
}

const char* attention_name(std::size_t kind) {
  static const char* names[] = {"user", "group", "event", "member"};
  return names[kind];
}

FmSlots register_fm(ModelParams& params, const std::string& prefix, std::size_t dim,
                    std::size_t rank) {
  FmSlots fm;
  fm.w0 = params.add(prefix + ".w0", 1, 1);
  fm.w1 = params.add(prefix + ".w1", 1, 2 * dim);
  fm.v = params.add(prefix + ".v", 2 * dim, rank);
  return fm;
}

}  // namespace

Layout register_params(const ModelConfig& config, ModelParams& params) {
  const std::size_t d = config.dims.dim;
  if (d < 1) throw_usage("embedding dimension must be >= 1");
  if (config.dims.fm_rank < 1) throw_usage("fm rank must be >= 1");
  const Universe& u = config.universe;
  if (u.users < 1 || u.events < 1) throw_usage("universe needs at least one user and one event");

  Layout layout;
  layout.users = params.add("embedding.user", u.users, d, SlotKind::table);
  layout.events = params.add("embedding.event", u.events, d, SlotKind::table);
  layout.groups = params.add("embedding.group", std::max<std::size_t>(u.groups, 1), d,
                             SlotKind::table);
  for (const auto& f : config.schema.factors()) {
    layout.contexts.push_back(
        params.add("embedding.context." + f.name, f.cardinality, d, SlotKind::table));
  }

  for (std::size_t kind = 0; kind < 3; ++kind) {
    for (const auto& f : config.schema.factors()) {
      ContextMlp mlp;
      std::size_t in = 2 * d;
      std::vector<std::size_t> outs = config.dims.hidden;
      outs.push_back(d);
      for (std::size_t l = 0; l < outs.size(); ++l) {
        const std::string base =
            std::string("mlp.") + entity_name(kind) + "." + f.name + ".layer" + std::to_string(l);
        mlp.weights.push_back(params.add(base + ".w", outs[l], in));
        mlp.biases.push_back(params.add(base + ".b", 1, outs[l]));
        in = outs[l];
      }
      layout.mlps[kind].push_back(std::move(mlp));
    }
  }

  for (std::size_t kind = 0; kind < 4; ++kind) {
    const std::string base = std::string("attention.") + attention_name(kind);
    AttentionNet& net = layout.attention[kind];
    net.w1 = params.add(base + ".w1", d, d);
    net.w2 = params.add(base + ".w2", d, d);
    net.bias = params.add(base + ".b", 1, d);
    net.proj = params.add(base + ".proj", 1, d);
  }

  layout.fm_group = register_fm(params, "fm", d, config.dims.fm_rank);
  layout.fm_user =
      config.share_fm ? layout.fm_group : register_fm(params, "fm.user", d, config.dims.fm_rank);
  return layout;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed,
                        const DenseMatrix* pretrained_content, Layout* layout_out) {
  ModelParams params;
  Layout layout = register_params(config, params);
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (SlotId s = 0; s < params.size(); ++s) {
    for (double& v : params[s].value.span()) {
      v = normal(rng);
    }
  }
  if (pretrained_content) {
    const auto content = config.schema.content_factor();
    if (!content) {
      throw_usage("pretrained content supplied but the schema has no content factor");
    }
    auto& table = params[layout.contexts[*content]].value;
    if (pretrained_content->rows() != table.rows() || pretrained_content->cols() != table.cols()) {
      throw_data("pretrained content matrix is " + shape_string(*pretrained_content) +
                 ", content table is " + shape_string(table));
    }
    table = *pretrained_content;
  }
  if (layout_out) *layout_out = std::move(layout);
  return params;
}

Model::Model(ModelConfig config, ModelParams params, const std::vector<GroupRoster>& rosters,
             EventCatalog catalog, std::vector<double> expertise)
  : config_(std::move(config)), params_(std::move(params)), catalog_(std::move(catalog)) {
  config_.variant.validate();
  ModelParams shape;
  layout_ = register_params(config_, shape);
  if (shape.size() != params_.size()) {
    throw_data("parameter set does not match the model configuration");
  }
  for (SlotId s = 0; s < shape.size(); ++s) {
    if (shape[s].name != params_[s].name || shape[s].kind != params_[s].kind ||
        shape[s].value.rows() != params_[s].value.rows() ||
        shape[s].value.cols() != params_[s].value.cols()) {
      throw_data("parameter '" + params_[s].name + "' does not match the model configuration");
    }
  }
  set_rosters(rosters);
  set_expertise(std::move(expertise));
}

Model Model::create(ModelConfig config, const std::vector<GroupRoster>& rosters,
                    EventCatalog catalog, std::uint64_t seed,
                    const DenseMatrix* pretrained_content) {
  ModelParams params = init_params(config, seed, pretrained_content);
  return Model(std::move(config), std::move(params), rosters, std::move(catalog), {});
}

void Model::set_variant(const VariantConfig& v) {
  v.validate();
  config_.variant = v;
}

const std::vector<std::uint32_t>& Model::members(std::uint32_t group) const {
  if (group >= members_.size() || members_[group].empty()) {
    throw_data("group " + std::to_string(group) + " has no roster");
  }
  return members_[group];
}

std::vector<GroupRoster> Model::rosters() const {
  std::vector<GroupRoster> out;
  for (std::uint32_t g = 0; g < members_.size(); ++g) {
    if (!members_[g].empty()) out.push_back(GroupRoster{g, members_[g]});
  }
  return out;
}

void Model::set_rosters(const std::vector<GroupRoster>& rosters) {
  members_.assign(config_.universe.groups, {});
  for (const auto& r : rosters) {
    if (r.group_id >= config_.universe.groups) {
      throw_data("roster for group " + std::to_string(r.group_id) + " outside the universe");
    }
    auto members = r.members;
    std::sort(members.begin(), members.end());
    for (auto m : members) {
      if (m >= config_.universe.users) {
        throw_data("group " + std::to_string(r.group_id) + " lists unknown user " +
                   std::to_string(m));
      }
    }
    members_[r.group_id] = std::move(members);
  }
}

void Model::set_expertise(std::vector<double> counts) {
  if (!counts.empty() && counts.size() != config_.universe.users) {
    throw_data("expertise table has " + std::to_string(counts.size()) + " entries for " +
               std::to_string(config_.universe.users) + " users");
  }
  expertise_ = std::move(counts);
}

}  // namespace acger
