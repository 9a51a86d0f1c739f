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

#include "acger/model.hpp"
#include "acger/numerics.hpp"

namespace acger {

// Factorization machine weights: global bias, linear term over 2d inputs and
// a 2d x rank factor matrix.
struct FmParams {
  double w0 = 0.0;
  DenseVector w1;
  DenseMatrix v;
};

FmParams fm_params(const ModelParams& params, const FmSlots& slots);

// w0 + w1.x + 1/2 sum_c [(v_c.x)^2 - (v_c o v_c).(x o x)], O(len(x) * rank).
double fm_score(const DenseVector& x, const FmParams& fm);

// w0 + w1.x + sum_{i<j} <v_i, v_j> x_i x_j, the explicit pairwise form.
double fm_score_naive(const DenseVector& x, const FmParams& fm);

// FM score of [actor, event].
double predict(const DenseVector& actor, const DenseVector& event, const FmParams& fm);

}  // namespace acger
