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

#include <array>
#include <cstdint>
#include <vector>

#include "acger/data.hpp"
#include "acger/params.hpp"
#include "acger/variants.hpp"

namespace acger {

enum class EntityKind : std::uint8_t { user = 0, event = 1, group = 2 };
// user, group and event weigh contextual factors; member weighs group members.
enum class AttentionKind : std::uint8_t { user = 0, group = 1, event = 2, member = 3 };

struct ModelDims {
  std::size_t dim = 32;
  std::vector<std::size_t> hidden = {48, 40};
  std::size_t fm_rank = 10;

  bool operator==(const ModelDims&) const = default;
};

struct ModelConfig {
  ModelDims dims;
  ContextSchema schema;
  Universe universe;
  VariantConfig variant;
  // One FM head for both tasks, or a separate head for the individual task.
  bool share_fm = true;

  bool operator==(const ModelConfig&) const = default;
};

// Per-(entity kind, factor) MLP: 2d -> hidden... -> d, ReLU after every layer.
struct ContextMlp {
  std::vector<SlotId> weights;
  std::vector<SlotId> biases;
};

// score = proj . ReLU(w1 left + w2 right + bias)
struct AttentionNet {
  SlotId w1 = 0;
  SlotId w2 = 0;
  SlotId bias = 0;
  SlotId proj = 0;
};

struct FmSlots {
  SlotId w0 = 0;
  SlotId w1 = 0;
  SlotId v = 0;
};

struct Layout {
  SlotId users = 0;
  SlotId events = 0;
  SlotId groups = 0;
  std::vector<SlotId> contexts;
  std::array<std::vector<ContextMlp>, 3> mlps;
  std::array<AttentionNet, 4> attention{};
  FmSlots fm_group;
  FmSlots fm_user;

  const ContextMlp& mlp(EntityKind kind, std::size_t factor) const {
    return mlps[static_cast<std::size_t>(kind)][factor];
  }
  const AttentionNet& att(AttentionKind kind) const {
    return attention[static_cast<std::size_t>(kind)];
  }
};

// Registers every trainable tensor of the configuration (zero-filled).
Layout register_params(const ModelConfig& config, ModelParams& params);

// Registers and samples every tensor i.i.d. N(0, 0.1^2), deterministic per
// seed. When given, pretrained_content overwrites the content factor's table.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed,
                        const DenseMatrix* pretrained_content = nullptr,
                        Layout* layout = nullptr);

// Parameters plus the non-trainable structure the forward pass needs: group
// rosters, per-event contexts and member expertise counts.
class Model {
 public:
  Model(ModelConfig config, ModelParams params, const std::vector<GroupRoster>& rosters,
        EventCatalog catalog, std::vector<double> expertise);

  static Model create(ModelConfig config, const std::vector<GroupRoster>& rosters,
                      EventCatalog catalog, std::uint64_t seed,
                      const DenseMatrix* pretrained_content = nullptr);

  const ModelConfig& config() const noexcept { return config_; }
  const VariantConfig& variant() const noexcept { return config_.variant; }
  void set_variant(const VariantConfig& v);
  std::size_t dim() const noexcept { return config_.dims.dim; }
  std::size_t factors() const noexcept { return config_.schema.size(); }

  ModelParams& params() noexcept { return params_; }
  const ModelParams& params() const noexcept { return params_; }
  const Layout& layout() const noexcept { return layout_; }

  // Members of g in ascending id order.
  const std::vector<std::uint32_t>& members(std::uint32_t group) const;
  std::vector<GroupRoster> rosters() const;
  const EventCatalog& catalog() const noexcept { return catalog_; }
  const std::vector<double>& expertise() const noexcept { return expertise_; }
  void set_expertise(std::vector<double> counts);
  void set_rosters(const std::vector<GroupRoster>& rosters);

 private:
  ModelConfig config_;
  ModelParams params_;
  Layout layout_;
  std::vector<std::vector<std::uint32_t>> members_;
  EventCatalog catalog_;
  std::vector<double> expertise_;
};

}  // namespace acger
