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

#include "acger/graph.hpp"

#include <algorithm>
#include <cmath>

#include "acger/error.hpp"

namespace acger {

namespace {

void require_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw_usage(std::string(what) + ": length mismatch " + std::to_string(a) +
                " vs " + std::to_string(b));
  }
}

}  // namespace

Graph::Graph(const ModelParams& params, Gradients* grads)
  : params_(params), grads_(grads) {
  nodes_.reserve(256);
}

Graph::Var Graph::push(Node node) {
  nodes_.push_back(std::move(node));
  return Var{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Graph::Var Graph::constant(DenseVector v) {
  Node n;
  n.op = Op::constant;
  n.value = v.values();
  return push(std::move(n));
}

Graph::Var Graph::lookup(SlotId table, std::size_t row) {
  const auto& slot = params_[table];
  if (row >= slot.value.rows()) {
    throw_data("lookup: id " + std::to_string(row) + " out of range for table '" +
               slot.name + "' with " + std::to_string(slot.value.rows()) + " rows");
  }
  Node n;
  n.op = Op::lookup;
  n.s0 = table;
  n.row = row;
  auto r = slot.value.row(row);
  n.value.assign(r.begin(), r.end());
  return push(std::move(n));
}

Graph::Var Graph::param(SlotId slot) {
  Node n;
  n.op = Op::param;
  n.s0 = slot;
  auto s = params_[slot].value.span();
  n.value.assign(s.begin(), s.end());
  return push(std::move(n));
}

Graph::Var Graph::affine(SlotId w, SlotId b, Var x) {
  const auto& wm = params_[w].value;
  const auto& bm = params_[b].value;
  const auto& xv = nodes_[x.id].value;
  if (wm.cols() != xv.size() || wm.rows() != bm.size()) {
    throw_usage("affine: weight " + shape_string(wm) + " incompatible with input " +
                std::to_string(xv.size()) + " and bias " + std::to_string(bm.size()));
  }
  Node n;
  n.op = Op::affine;
  n.a = x.id;
  n.s0 = w;
  n.s1 = b;
  n.value.resize(wm.rows());
  const double* bias = bm.data();
  for (std::size_t r = 0; r < wm.rows(); ++r) {
    n.value[r] = dot(wm.row(r), xv) + bias[r];
  }
  return push(std::move(n));
}

Graph::Var Graph::linear(SlotId w, Var x) {
  const auto& wm = params_[w].value;
  const auto& xv = nodes_[x.id].value;
  if (wm.cols() != xv.size()) {
    throw_usage("linear: weight " + shape_string(wm) + " incompatible with input " +
                std::to_string(xv.size()));
  }
  Node n;
  n.op = Op::linear;
  n.a = x.id;
  n.s0 = w;
  n.value.resize(wm.rows());
  for (std::size_t r = 0; r < wm.rows(); ++r) {
    n.value[r] = dot(wm.row(r), xv);
  }
  return push(std::move(n));
}

Graph::Var Graph::relu(Var x) {
  Node n;
  n.op = Op::relu;
  n.a = x.id;
  const auto& xv = nodes_[x.id].value;
  n.value.resize(xv.size());
  for (std::size_t i = 0; i < xv.size(); ++i) {
    n.value[i] = xv[i] > 0.0 ? xv[i] : 0.0;
  }
  if (pattern_) {
    // FNV-1a over the active/inactive bits.
    for (double v : xv) {
      *pattern_ = (*pattern_ ^ (v > 0.0 ? 0x9eu : 0x3bu)) * 0x100000001b3ULL;
    }
  }
  return push(std::move(n));
}

Graph::Var Graph::concat(Var a, Var b) {
  Node n;
  n.op = Op::concat;
  n.a = a.id;
  n.b = b.id;
  const auto& av = nodes_[a.id].value;
  const auto& bv = nodes_[b.id].value;
  n.value.reserve(av.size() + bv.size());
  n.value.insert(n.value.end(), av.begin(), av.end());
  n.value.insert(n.value.end(), bv.begin(), bv.end());
  return push(std::move(n));
}

Graph::Var Graph::add(Var a, Var b) {
  const auto& av = nodes_[a.id].value;
  const auto& bv = nodes_[b.id].value;
  require_same(av.size(), bv.size(), "add");
  Node n;
  n.op = Op::add;
  n.a = a.id;
  n.b = b.id;
  n.value.resize(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    n.value[i] = av[i] + bv[i];
  }
  return push(std::move(n));
}

Graph::Var Graph::sub(Var a, Var b) {
  const auto& av = nodes_[a.id].value;
  const auto& bv = nodes_[b.id].value;
  require_same(av.size(), bv.size(), "sub");
  Node n;
  n.op = Op::sub;
  n.a = a.id;
  n.b = b.id;
  n.value.resize(av.size());
  for (std::size_t i = 0; i < av.size(); ++i) {
    n.value[i] = av[i] - bv[i];
  }
  return push(std::move(n));
}

Graph::Var Graph::dot_param(SlotId proj, Var x) {
  const auto& p = params_[proj].value;
  const auto& xv = nodes_[x.id].value;
  require_same(p.size(), xv.size(), "dot_param");
  Node n;
  n.op = Op::dot_param;
  n.a = x.id;
  n.s0 = proj;
  n.value.assign(1, dot(p.span(), xv));
  return push(std::move(n));
}

Graph::Var Graph::stack(std::span<const Var> scalars) {
  Node n;
  n.op = Op::stack;
  n.list_begin = static_cast<std::uint32_t>(lists_.size());
  n.list_len = static_cast<std::uint32_t>(scalars.size());
  n.value.reserve(scalars.size());
  for (Var s : scalars) {
    require_same(nodes_[s.id].value.size(), 1, "stack");
    lists_.push_back(s.id);
    n.value.push_back(nodes_[s.id].value[0]);
  }
  return push(std::move(n));
}

Graph::Var Graph::softmax(Var x) {
  const auto& xv = nodes_[x.id].value;
  if (xv.empty()) {
    throw_numeric("empty softmax");
  }
  Node n;
  n.op = Op::softmax;
  n.a = x.id;
  const double mx = *std::max_element(xv.begin(), xv.end());
  n.value.resize(xv.size());
  double total = 0.0;
  for (std::size_t i = 0; i < xv.size(); ++i) {
    n.value[i] = std::exp(xv[i] - mx);
    total += n.value[i];
  }
  for (double& v : n.value) {
    v /= total;
  }
  return push(std::move(n));
}

Graph::Var Graph::weighted_sum(Var weights, std::span<const Var> xs) {
  const auto& wv = nodes_[weights.id].value;
  require_same(wv.size(), xs.size(), "weighted_sum");
  if (xs.empty()) {
    throw_usage("weighted_sum: no inputs");
  }
  Node n;
  n.op = Op::weighted_sum;
  n.a = weights.id;
  n.list_begin = static_cast<std::uint32_t>(lists_.size());
  n.list_len = static_cast<std::uint32_t>(xs.size());
  const std::size_t dim = nodes_[xs[0].id].value.size();
  n.value.assign(dim, 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto& xv = nodes_[xs[i].id].value;
    require_same(xv.size(), dim, "weighted_sum");
    lists_.push_back(xs[i].id);
    axpy(wv[i], xv, n.value);
  }
  return push(std::move(n));
}

Graph::Var Graph::fm(SlotId w0, SlotId w1, SlotId v, Var x) {
  const auto& xv = nodes_[x.id].value;
  const auto& w1m = params_[w1].value;
  const auto& vm = params_[v].value;
  if (w1m.size() != xv.size() || vm.rows() != xv.size()) {
    throw_usage("fm: input length " + std::to_string(xv.size()) +
                " incompatible with linear " + std::to_string(w1m.size()) +
                " and factors " + shape_string(vm));
  }
  const std::size_t rank = vm.cols();
  double out = params_[w0].value(0, 0) + dot(w1m.span(), xv);
  double pair = 0.0;
  for (std::size_t c = 0; c < rank; ++c) {
    double s = 0.0;
    double sq = 0.0;
    for (std::size_t j = 0; j < xv.size(); ++j) {
      const double vx = vm(j, c) * xv[j];
      s += vx;
      sq += vx * vx;
    }
    pair += s * s - sq;
  }
  out += 0.5 * pair;
  Node n;
  n.op = Op::fm;
  n.a = x.id;
  n.s0 = w0;
  n.s1 = w1;
  n.s2 = v;
  n.value.assign(1, out);
  return push(std::move(n));
}

Graph::Var Graph::neg_log_sigmoid(Var z) {
  const auto& zv = nodes_[z.id].value;
  require_same(zv.size(), 1, "neg_log_sigmoid");
  const double t = zv[0];
  // log(1 + exp(-t)) without overflow for either sign of t.
  const double out = t > 0.0 ? std::log1p(std::exp(-t)) : -t + std::log1p(std::exp(t));
  Node n;
  n.op = Op::neg_log_sigmoid;
  n.a = z.id;
  n.value.assign(1, out);
  return push(std::move(n));
}

void Graph::clear() {
  nodes_.clear();
  lists_.clear();
}

void Graph::backward(Var out, double scale) {
  if (!grads_) {
    throw_usage("backward on an inference-only graph");
  }
  if (nodes_[out.id].value.size() != 1) {
    throw_usage("backward requires a scalar output");
  }
  std::vector<std::vector<double>> g(out.id + 1);
  g[out.id].assign(1, scale);

  auto acc = [&](std::uint32_t id) -> std::vector<double>& {
    auto& slot = g[id];
    if (slot.empty()) {
      slot.assign(nodes_[id].value.size(), 0.0);
    }
    return slot;
  };

  for (std::int64_t idx = out.id; idx >= 0; --idx) {
    const auto id = static_cast<std::uint32_t>(idx);
    if (g[id].empty()) {
      continue;
    }
    const Node& n = nodes_[id];
    const std::vector<double>& gy = g[id];
    switch (n.op) {
      case Op::constant:
        break;
      case Op::lookup: {
        auto row = grads_->grad(n.s0).row(n.row);
        axpy(1.0, gy, row);
        grads_->touch_row(n.s0, n.row);
        break;
      }
      case Op::param: {
        axpy(1.0, gy, grads_->grad(n.s0).span());
        grads_->touch(n.s0);
        break;
      }
      case Op::affine: {
        const auto& wm = params_[n.s0].value;
        const auto& xv = nodes_[n.a].value;
        auto& dw = grads_->grad(n.s0);
        auto& db = grads_->grad(n.s1);
        auto& dx = acc(n.a);
        double* dbp = db.data();
        for (std::size_t r = 0; r < wm.rows(); ++r) {
          const double gr = gy[r];
          if (gr == 0.0) {
            continue;
          }
          dbp[r] += gr;
          axpy(gr, xv, dw.row(r));
          axpy(gr, wm.row(r), dx);
        }
        grads_->touch(n.s0);
        grads_->touch(n.s1);
        break;
      }
      case Op::linear: {
        const auto& wm = params_[n.s0].value;
        const auto& xv = nodes_[n.a].value;
        auto& dw = grads_->grad(n.s0);
        auto& dx = acc(n.a);
        for (std::size_t r = 0; r < wm.rows(); ++r) {
          const double gr = gy[r];
          if (gr == 0.0) {
            continue;
          }
          axpy(gr, xv, dw.row(r));
          axpy(gr, wm.row(r), dx);
        }
        grads_->touch(n.s0);
        break;
      }
      case Op::relu: {
        auto& dx = acc(n.a);
        const auto& xv = nodes_[n.a].value;
        for (std::size_t i = 0; i < gy.size(); ++i) {
          if (xv[i] > 0.0) {
            dx[i] += gy[i];
          }
        }
        break;
      }
      case Op::concat: {
        const std::size_t na = nodes_[n.a].value.size();
        auto& da = acc(n.a);
        for (std::size_t i = 0; i < na; ++i) {
          da[i] += gy[i];
        }
        auto& db = acc(n.b);
        for (std::size_t i = 0; i < db.size(); ++i) {
          db[i] += gy[na + i];
        }
        break;
      }
      case Op::add: {
        axpy(1.0, gy, acc(n.a));
        axpy(1.0, gy, acc(n.b));
        break;
      }
      case Op::sub: {
        axpy(1.0, gy, acc(n.a));
        axpy(-1.0, gy, acc(n.b));
        break;
      }
      case Op::dot_param: {
        const auto& p = params_[n.s0].value;
        axpy(gy[0], nodes_[n.a].value, grads_->grad(n.s0).span());
        grads_->touch(n.s0);
        axpy(gy[0], p.span(), acc(n.a));
        break;
      }
      case Op::stack: {
        auto ids = list(n);
        for (std::size_t i = 0; i < ids.size(); ++i) {
          acc(ids[i])[0] += gy[i];
        }
        break;
      }
      case Op::softmax: {
        const auto& y = n.value;
        const double inner = dot(y, gy);
        auto& dx = acc(n.a);
        for (std::size_t i = 0; i < y.size(); ++i) {
          dx[i] += y[i] * (gy[i] - inner);
        }
        break;
      }
      case Op::weighted_sum: {
        auto ids = list(n);
        const auto& wv = nodes_[n.a].value;
        auto& dw = acc(n.a);
        for (std::size_t i = 0; i < ids.size(); ++i) {
          dw[i] += dot(gy, nodes_[ids[i]].value);
          axpy(wv[i], gy, acc(ids[i]));
        }
        break;
      }
      case Op::fm: {
        const double gs = gy[0];
        const auto& xv = nodes_[n.a].value;
        const auto& w1m = params_[n.s1].value;
        const auto& vm = params_[n.s2].value;
        const std::size_t rank = vm.cols();
        auto& dx = acc(n.a);
        auto& dw1 = grads_->grad(n.s1);
        auto& dv = grads_->grad(n.s2);
        grads_->grad(n.s0)(0, 0) += gs;
        std::vector<double> sums(rank, 0.0);
        for (std::size_t c = 0; c < rank; ++c) {
          for (std::size_t j = 0; j < xv.size(); ++j) {
            sums[c] += vm(j, c) * xv[j];
          }
        }
        double* dw1p = dw1.data();
        const double* w1p = w1m.data();
        for (std::size_t j = 0; j < xv.size(); ++j) {
          const double xj = xv[j];
          dw1p[j] += gs * xj;
          double dxj = w1p[j];
          for (std::size_t c = 0; c < rank; ++c) {
            const double vjc = vm(j, c);
            dxj += vjc * (sums[c] - vjc * xj);
            dv(j, c) += gs * (xj * sums[c] - vjc * xj * xj);
          }
          dx[j] += gs * dxj;
        }
        grads_->touch(n.s0);
        grads_->touch(n.s1);
        grads_->touch(n.s2);
        break;
      }
      case Op::neg_log_sigmoid: {
        const double t = nodes_[n.a].value[0];
        // d/dt -ln σ(t) = -σ(-t)
        const double s = t >= 0.0 ? std::exp(-t) / (1.0 + std::exp(-t))
                                  : 1.0 / (1.0 + std::exp(t));
        acc(n.a)[0] += -gy[0] * s;
        break;
      }
    }
  }
}

}  // namespace acger
