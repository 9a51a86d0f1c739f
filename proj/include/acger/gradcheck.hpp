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

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "acger/params.hpp"

namespace acger {

// Loss evaluated at the current parameters. When grads is non-null the
// function must also accumulate the analytic gradient into it.
using LossFn = std::function<double(const ModelParams& params, Gradients* grads)>;

// Returns a fingerprint of the piecewise-linear region (ReLU sign pattern)
// of the loss evaluations since its previous call.
using RegionFn = std::function<std::uint64_t()>;

struct SlotCheck {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t entries_checked = 0;
  std::size_t entries_skipped = 0;  // perturbation crossed a ReLU kink
};

struct GradCheckReport {
  std::vector<SlotCheck> slots;

  double max_rel_error() const;
  bool passed(double tol) const { return max_rel_error() < tol; }
};

// |a - n| / max(|a|, |n|, 1e-8)
double relative_error(double analytic, double numeric);

// Compares analytic gradients against central differences with step h. Slots
// with more than max_entries_per_slot entries are subsampled (at least 32
// entries, chosen by seed); 0 checks every entry. Parameters are restored
// exactly afterwards. With a region function, entries whose +h or -h
// evaluation lands in a different ReLU region than the base point are
// skipped: the loss is not differentiable between the two probes.
GradCheckReport grad_check(const LossFn& loss, ModelParams& params, double h,
                           std::size_t max_entries_per_slot = 0,
                           std::uint64_t seed = 0, const RegionFn& region = {});

}  // namespace acger
