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

#include <string>
#include <string_view>
#include <vector>

namespace acger {

// How contextual factors are weighted for each entity.
enum class ContextWeighting { full, avg, ain, single_u, single_e, none };
// How members are combined into the group's indirect preference.
enum class Aggregation { attention, avg, borda, expertise, most_pleasure };
// Which parts of the group preference are kept.
enum class Preference { both, indirect_only, direct_only };

struct VariantConfig {
  ContextWeighting context = ContextWeighting::full;
  Aggregation aggregation = Aggregation::attention;
  Preference preference = Preference::both;
  bool individual_task = true;

  // Throws on incoherent combinations.
  void validate() const;

  // Borda and most-pleasure combine member scores instead of embeddings.
  bool score_level_aggregation() const {
    return aggregation == Aggregation::borda || aggregation == Aggregation::most_pleasure;
  }
  bool user_context() const {
    return context != ContextWeighting::none && context != ContextWeighting::single_e;
  }
  bool event_context() const {
    return context != ContextWeighting::none && context != ContextWeighting::single_u;
  }

  bool operator==(const VariantConfig&) const = default;
};

std::string_view to_string(ContextWeighting v);
std::string_view to_string(Aggregation v);
std::string_view to_string(Preference v);

ContextWeighting parse_context_weighting(std::string_view s);
Aggregation parse_aggregation(std::string_view s);
Preference parse_preference(std::string_view s);

// Named ablations: ACGER, Avg_ACGER2, AIN_ACGER2, SingleU_ACGER2,
// SingleE_ACGER2, ACGER1_Avg, ACGER1_BC, ACGER1_Exp, ACGER1_MP, ACGER_U,
// ACGER_G, ACGER_Grp, ACGER2.
VariantConfig variant_preset(std::string_view label);
const std::vector<std::string>& variant_labels();

}  // namespace acger
