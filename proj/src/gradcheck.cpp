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

#include "acger/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "acger/error.hpp"

namespace acger {

double GradCheckReport::max_rel_error() const {
  double m = 0.0;
  for (const auto& s : slots) {
    m = std::max(m, s.max_rel_error);
  }
  return m;
}

double relative_error(double analytic, double numeric) {
  const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
  return std::abs(analytic - numeric) / denom;
}

GradCheckReport grad_check(const LossFn& loss, ModelParams& params, double h,
                           std::size_t max_entries_per_slot, std::uint64_t seed,
                           const RegionFn& region) {
  if (!(h > 0.0)) {
    throw_usage("grad_check: step must be positive");
  }
  Gradients grads(params);
  if (region) region();
  const double base = loss(params, &grads);
  const std::uint64_t base_region = region ? region() : 0;
  if (!std::isfinite(base)) {
    throw_numeric("loss not finite");
  }

  std::mt19937_64 rng(seed);
  GradCheckReport report;
  for (SlotId s = 0; s < params.size(); ++s) {
    auto values = params[s].value.span();
    const auto analytic = grads.grad(s).span();

    std::vector<std::size_t> entries(values.size());
    std::iota(entries.begin(), entries.end(), std::size_t{0});
    if (max_entries_per_slot != 0) {
      const std::size_t keep = std::max<std::size_t>(32, max_entries_per_slot);
      if (entries.size() > keep) {
        std::shuffle(entries.begin(), entries.end(), rng);
        entries.resize(keep);
        std::sort(entries.begin(), entries.end());
      }
    }

    SlotCheck check{params[s].name, 0.0, entries.size(), 0};
    for (std::size_t i : entries) {
      const double saved = values[i];
      values[i] = saved + h;
      const double up = loss(params, nullptr);
      const std::uint64_t up_region = region ? region() : 0;
      values[i] = saved - h;
      const double down = loss(params, nullptr);
      const std::uint64_t down_region = region ? region() : 0;
      values[i] = saved;
      if (!std::isfinite(up) || !std::isfinite(down)) {
        throw_numeric("loss not finite");
      }
      if (up_region != base_region || down_region != base_region) {
        ++check.entries_skipped;
        continue;
      }
      const double numeric = (up - down) / (2.0 * h);
      check.max_rel_error = std::max(check.max_rel_error, relative_error(analytic[i], numeric));
    }
    report.slots.push_back(std::move(check));
  }
  return report;
}

}  // namespace acger
