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

#include "acger/variants.hpp"

#include "acger/error.hpp"

namespace acger {

void VariantConfig::validate() const {
  if (score_level_aggregation() && preference == Preference::direct_only) {
    throw_usage("aggregation '" + std::string(to_string(aggregation)) +
                "' cannot be combined with preference 'direct_only'");
  }
  if (score_level_aggregation() && !individual_task) {
    throw_usage("aggregation '" + std::string(to_string(aggregation)) +
                "' needs the individual task to learn member scores");
  }
}

std::string_view to_string(ContextWeighting v) {
  switch (v) {
    case ContextWeighting::full: return "full";
    case ContextWeighting::avg: return "avg";
    case ContextWeighting::ain: return "ain";
    case ContextWeighting::single_u: return "single_u";
    case ContextWeighting::single_e: return "single_e";
    case ContextWeighting::none: return "none";
  }
  return "full";
}

std::string_view to_string(Aggregation v) {
  switch (v) {
    case Aggregation::attention: return "attention";
    case Aggregation::avg: return "avg";
    case Aggregation::borda: return "borda";
    case Aggregation::expertise: return "expertise";
    case Aggregation::most_pleasure: return "most_pleasure";
  }
  return "attention";
}

std::string_view to_string(Preference v) {
  switch (v) {
    case Preference::both: return "both";
    case Preference::indirect_only: return "indirect_only";
    case Preference::direct_only: return "direct_only";
  }
  return "both";
}

ContextWeighting parse_context_weighting(std::string_view s) {
  for (auto v : {ContextWeighting::full, ContextWeighting::avg, ContextWeighting::ain,
                 ContextWeighting::single_u, ContextWeighting::single_e, ContextWeighting::none}) {
    if (s == to_string(v)) return v;
  }
  throw_usage("unknown context weighting '" + std::string(s) + "'");
}

Aggregation parse_aggregation(std::string_view s) {
  for (auto v : {Aggregation::attention, Aggregation::avg, Aggregation::borda,
                 Aggregation::expertise, Aggregation::most_pleasure}) {
    if (s == to_string(v)) return v;
  }
  throw_usage("unknown aggregation '" + std::string(s) + "'");
}

Preference parse_preference(std::string_view s) {
  for (auto v : {Preference::both, Preference::indirect_only, Preference::direct_only}) {
    if (s == to_string(v)) return v;
  }
  throw_usage("unknown preference '" + std::string(s) + "'");
}

VariantConfig variant_preset(std::string_view label) {
  VariantConfig v;
  if (label == "ACGER") {
  } else if (label == "Avg_ACGER2") {
    v.context = ContextWeighting::avg;
  } else if (label == "AIN_ACGER2") {
    v.context = ContextWeighting::ain;
  } else if (label == "SingleU_ACGER2") {
    v.context = ContextWeighting::single_u;
  } else if (label == "SingleE_ACGER2") {
    v.context = ContextWeighting::single_e;
  } else if (label == "ACGER1_Avg") {
    v.aggregation = Aggregation::avg;
  } else if (label == "ACGER1_BC") {
    v.aggregation = Aggregation::borda;
  } else if (label == "ACGER1_Exp") {
    v.aggregation = Aggregation::expertise;
  } else if (label == "ACGER1_MP") {
    v.aggregation = Aggregation::most_pleasure;
  } else if (label == "ACGER_U") {
    v.preference = Preference::indirect_only;
  } else if (label == "ACGER_G") {
    v.preference = Preference::direct_only;
  } else if (label == "ACGER_Grp") {
    v.individual_task = false;
  } else if (label == "ACGER2") {
    v.context = ContextWeighting::none;
  } else {
    throw_usage("unknown variant '" + std::string(label) + "'");
  }
  return v;
}

const std::vector<std::string>& variant_labels() {
  static const std::vector<std::string> labels = {
      "ACGER",      "Avg_ACGER2", "AIN_ACGER2", "SingleU_ACGER2", "SingleE_ACGER2",
      "ACGER1_Avg", "ACGER1_BC",  "ACGER1_Exp", "ACGER1_MP",      "ACGER_U",
      "ACGER_G",    "ACGER_Grp",  "ACGER2"};
  return labels;
}

}  // namespace acger
