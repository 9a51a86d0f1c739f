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

#include "acger/diagnostics.hpp"

#include <cstdio>

#include "acger/error.hpp"
#include "acger/graph.hpp"
#include "acger/pipeline.hpp"
#include "text_io.hpp"

namespace acger {

std::vector<AttentionRecord> attention_weights(const Model& model,
                                               std::span<const Interaction> records,
                                               AttentionTarget target) {
  std::vector<AttentionRecord> out;
  const VariantConfig& variant = model.variant();
  if (target == AttentionTarget::context && !variant.user_context()) return out;
  if (target == AttentionTarget::members &&
      (variant.score_level_aggregation() || variant.preference == Preference::direct_only)) {
    return out;
  }
  ForwardCache cache;
  Graph g(model.params(), nullptr);
  for (const auto& r : records) {
    if (target == AttentionTarget::members && r.actor_kind == ActorKind::user) continue;
    g.clear();
    Forward fwd(model, g, &cache);
    const EventRep ev = fwd.event(r.event_id, r.context);
    std::optional<Graph::Var> w;
    if (target == AttentionTarget::members) {
      w = fwd.group(r.actor_id, r.context, ev).member_weights;
    } else if (r.actor_kind == ActorKind::user) {
      w = fwd.user(r.actor_id, r.context, ev).weights;
    } else {
      w = fwd.group_direct(r.actor_id, r.context, ev).weights;
    }
    if (!w) continue;
    out.push_back(AttentionRecord{r.actor_kind, r.actor_id, r.event_id, g.value(*w)});
  }
  return out;
}

std::vector<double> event_attention(const Model& model, std::uint32_t e, const ContextTuple& ctx) {
  Graph g(model.params(), nullptr);
  Forward fwd(model, g);
  const EventRep ev = fwd.event(e, ctx);
  return ev.weights ? g.value(*ev.weights) : std::vector<double>{};
}

void write_attention(const std::string& path, std::span<const AttentionRecord> records) {
  std::string text = "# actor\tevent\tweights\n";
  char buf[32];
  for (const auto& r : records) {
    text += actor_label(r.actor_kind, r.actor) + "\t" + std::to_string(r.event) + "\t";
    for (std::size_t i = 0; i < r.weights.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", r.weights[i]);
      text += buf;
    }
    text += "\n";
  }
  write_text_file(path, text);
}

std::vector<double> mean_weights(std::span<const AttentionRecord> records) {
  if (records.empty()) return {};
  const std::size_t k = records.front().weights.size();
  std::vector<double> mean(k, 0.0);
  for (const auto& r : records) {
    if (r.weights.size() != k) throw_usage("mean_weights: records differ in length");
    for (std::size_t i = 0; i < k; ++i) mean[i] += r.weights[i];
  }
  for (double& m : mean) m /= static_cast<double>(records.size());
  return mean;
}

AttentionTarget parse_attention_target(std::string_view s) {
  if (s == "context") return AttentionTarget::context;
  if (s == "members") return AttentionTarget::members;
  throw_usage("unknown attention target '" + std::string(s) + "' (expected context or members)");
}

}  // namespace acger
