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

// Value-level entry points for the individual building blocks of the model.
// They evaluate the same graph operations the training path uses.

#pragma once

#include <span>
#include <vector>

#include "acger/model.hpp"
#include "acger/numerics.hpp"

namespace acger {

// Output of a ContextMlp on [entity, context].
DenseVector contextualize(const ModelParams& params, const ContextMlp& mlp,
                          const DenseVector& entity, const DenseVector& context);

// score_i = proj . ReLU(w1 left_i + w2 right_i + b)
DenseVector context_attention_scores(const ModelParams& params, const AttentionNet& net,
                                     std::span<const DenseVector> left,
                                     std::span<const DenseVector> right);

struct EnhancedEmbedding {
  DenseVector vector;
  DenseVector weights;
};

// weights = softmax(scores), vector = sum_i weights_i * contextualized_i.
EnhancedEmbedding enhance(std::span<const DenseVector> contextualized, const DenseVector& scores);

// Softmax over members of proj . ReLU(w1 member + w2 event + b).
DenseVector member_weights(const ModelParams& params, const AttentionNet& net,
                           std::span<const DenseVector> members, const DenseVector& event);

struct GroupPreference {
  DenseVector indirect;
  DenseVector direct;
  DenseVector fused;
  DenseVector member_weights;
};

GroupPreference fuse_group_preference(std::span<const DenseVector> members,
                                      const DenseVector& weights, const DenseVector& direct);

}  // namespace acger
