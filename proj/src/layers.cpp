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

#include "acger/layers.hpp"

#include "acger/error.hpp"
#include "acger/graph.hpp"

namespace acger {

DenseVector contextualize(const ModelParams& params, const ContextMlp& mlp,
                          const DenseVector& entity, const DenseVector& context) {
  if (entity.size() != context.size()) {
    throw_usage("contextualize: entity length " + std::to_string(entity.size()) +
                " differs from context length " + std::to_string(context.size()));
  }
  Graph g(params, nullptr);
  Graph::Var h = g.concat(g.constant(entity), g.constant(context));
  for (std::size_t l = 0; l < mlp.weights.size(); ++l) {
    h = g.relu(g.affine(mlp.weights[l], mlp.biases[l], h));
  }
  return g.vector(h);
}

DenseVector context_attention_scores(const ModelParams& params, const AttentionNet& net,
                                     std::span<const DenseVector> left,
                                     std::span<const DenseVector> right) {
  if (left.size() != right.size()) {
    throw_usage("attention: " + std::to_string(left.size()) + " left inputs vs " +
                std::to_string(right.size()) + " right inputs");
  }
  Graph g(params, nullptr);
  DenseVector scores(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    Graph::Var pre = g.add(g.affine(net.w1, net.bias, g.constant(left[i])),
                           g.linear(net.w2, g.constant(right[i])));
    scores[i] = g.scalar(g.dot_param(net.proj, g.relu(pre)));
  }
  return scores;
}

EnhancedEmbedding enhance(std::span<const DenseVector> contextualized, const DenseVector& scores) {
  if (contextualized.size() != scores.size()) {
    throw_usage("enhance: " + std::to_string(contextualized.size()) + " embeddings vs " +
                std::to_string(scores.size()) + " scores");
  }
  EnhancedEmbedding out;
  out.weights = softmax(scores);
  out.vector = DenseVector(contextualized.front().size(), 0.0);
  for (std::size_t i = 0; i < contextualized.size(); ++i) {
    if (contextualized[i].size() != out.vector.size()) {
      throw_usage("enhance: contextualized embeddings differ in length");
    }
    axpy(out.weights[i], contextualized[i].span(), out.vector.span());
  }
  return out;
}

DenseVector member_weights(const ModelParams& params, const AttentionNet& net,
                           std::span<const DenseVector> members, const DenseVector& event) {
  if (members.empty()) {
    throw_data("member_weights: empty group");
  }
  std::vector<DenseVector> right(members.size(), event);
  return softmax(context_attention_scores(params, net, members, right));
}

GroupPreference fuse_group_preference(std::span<const DenseVector> members,
                                      const DenseVector& weights, const DenseVector& direct) {
  if (members.size() != weights.size()) {
    throw_usage("fuse_group_preference: member and weight counts differ");
  }
  GroupPreference out;
  out.direct = direct;
  out.member_weights = weights;
  out.indirect = DenseVector(direct.size(), 0.0);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i].size() != direct.size()) {
      throw_usage("fuse_group_preference: member embedding length mismatch");
    }
    axpy(weights[i], members[i].span(), out.indirect.span());
  }
  out.fused = DenseVector(direct.size());
  for (std::size_t j = 0; j < direct.size(); ++j) {
    out.fused[j] = out.indirect[j] + direct[j];
  }
  return out;
}

}  // namespace acger
