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
#include <span>
#include <vector>

#include "acger/numerics.hpp"
#include "acger/params.hpp"

namespace acger {

// Reverse-mode evaluation of the fixed set of operations the model uses.
// Values are computed eagerly as nodes are added. When constructed with a
// Gradients sink, backward() accumulates d(output)/d(parameter) into it;
// otherwise the graph is inference-only and backward() is unavailable.
class Graph {
 public:
  struct Var {
    std::uint32_t id = 0;
  };

  Graph(const ModelParams& params, Gradients* grads);

  bool recording() const noexcept { return grads_ != nullptr; }
  const ModelParams& params() const noexcept { return params_; }

  Var constant(DenseVector v);
  Var lookup(SlotId table, std::size_t row);
  // Whole parameter slot, flattened row-major.
  Var param(SlotId slot);
  // W x + b, with W and b parameter slots (b flattened).
  Var affine(SlotId w, SlotId b, Var x);
  // W x without bias.
  Var linear(SlotId w, Var x);
  Var relu(Var x);
  Var concat(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  // Scalar projection of x onto a parameter vector.
  Var dot_param(SlotId proj, Var x);
  // Packs scalar vars into one vector.
  Var stack(std::span<const Var> scalars);
  Var softmax(Var x);
  // Σ weights[i] * xs[i]
  Var weighted_sum(Var weights, std::span<const Var> xs);
  // Factorization machine over x with global bias w0, linear weights w1 and
  // factor matrix v (rows = len(x), cols = rank).
  Var fm(SlotId w0, SlotId w1, SlotId v, Var x);
  // -ln σ(z) for scalar z.
  Var neg_log_sigmoid(Var z);

  const std::vector<double>& value(Var v) const { return nodes_[v.id].value; }
  DenseVector vector(Var v) const { return DenseVector(nodes_[v.id].value); }
  double scalar(Var v) const { return nodes_[v.id].value[0]; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  // Backpropagates from a scalar output with seed d(out) = scale.
  void backward(Var out, double scale = 1.0);

  // Drops every node; the graph can then be reused.
  void clear();

  // When set, every relu folds the sign pattern of its input into *sink.
  // Equal patterns on both sides of a perturbation mean no kink was crossed.
  void set_pattern_sink(std::uint64_t* sink) noexcept { pattern_ = sink; }

 private:
  enum class Op : std::uint8_t {
    constant,
    lookup,
    param,
    affine,
    linear,
    relu,
    concat,
    add,
    sub,
    dot_param,
    stack,
    softmax,
    weighted_sum,
    fm,
    neg_log_sigmoid,
  };

  struct Node {
    Op op = Op::constant;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    SlotId s0 = 0;
    SlotId s1 = 0;
    SlotId s2 = 0;
    std::size_t row = 0;
    std::uint32_t list_begin = 0;
    std::uint32_t list_len = 0;
    std::vector<double> value;
  };

  Var push(Node node);
  std::span<const std::uint32_t> list(const Node& n) const {
    return {lists_.data() + n.list_begin, n.list_len};
  }

  const ModelParams& params_;
  Gradients* grads_;
  std::uint64_t* pattern_ = nullptr;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> lists_;
};

}  // namespace acger
