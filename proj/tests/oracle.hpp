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

// Straight-line reference implementations for tests. Deliberately written
// with plain loops over raw parameter values and no library math helpers, so
// that agreement with the library is evidence rather than tautology.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "acger/model.hpp"

namespace oracle {

using Vec = std::vector<double>;

inline Vec row(const acger::ModelParams& p, acger::SlotId slot, std::size_t r) {
  const auto& m = p[slot].value;
  Vec out(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) out[c] = m(r, c);
  return out;
}

// W x (+ b) with W stored out x in.
inline Vec matvec(const acger::ModelParams& p, acger::SlotId w, const Vec& x,
                  const acger::SlotId* b = nullptr) {
  const auto& m = p[w].value;
  Vec out(m.rows(), 0.0);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c) * x[c];
    if (b) s += p[*b].value(0, r);
    out[r] = s;
  }
  return out;
}

inline Vec relu(Vec v) {
  for (double& x : v) x = x > 0.0 ? x : 0.0;
  return v;
}

inline Vec softmax(const Vec& s) {
  double mx = s[0];
  for (double x : s) mx = std::max(mx, x);
  Vec out(s.size());
  double z = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) z += (out[i] = std::exp(s[i] - mx));
  for (double& x : out) x /= z;
  return out;
}

inline Vec mlp(const acger::ModelParams& p, const acger::ContextMlp& net, const Vec& entity,
               const Vec& context) {
  Vec h = entity;
  h.insert(h.end(), context.begin(), context.end());
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    h = relu(matvec(p, net.weights[l], h, &net.biases[l]));
  }
  return h;
}

inline double attention_score(const acger::ModelParams& p, const acger::AttentionNet& net,
                              const Vec& left, const Vec& right) {
  const Vec a = matvec(p, net.w1, left, &net.bias);
  const Vec b = matvec(p, net.w2, right);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double h = a[i] + b[i];
    s += p[net.proj].value(0, i) * (h > 0.0 ? h : 0.0);
  }
  return s;
}

inline Vec weighted(const Vec& w, const std::vector<Vec>& xs) {
  Vec out(xs[0].size(), 0.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < out.size(); ++j) out[j] += w[i] * xs[i][j];
  }
  return out;
}

// Pairwise form: w0 + Σ w_i x_i + Σ_{i<j} <v_i, v_j> x_i x_j.
inline double fm(double w0, const Vec& w1, const std::vector<Vec>& v, const Vec& x) {
  double s = w0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w1[i] * x[i];
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double inner = 0.0;
      for (std::size_t f = 0; f < v[i].size(); ++f) inner += v[i][f] * v[j][f];
      s += inner * x[i] * x[j];
    }
  }
  return s;
}

inline double fm(const acger::ModelParams& p, const acger::FmSlots& slots, const Vec& x) {
  std::vector<Vec> v;
  for (std::size_t i = 0; i < x.size(); ++i) v.push_back(row(p, slots.v, i));
  return fm(p[slots.w0].value(0, 0), row(p, slots.w1, 0), v, x);
}

// Full-context (ACGER) representations.
struct Rep {
  Vec raw;
  std::vector<Vec> ctx;
  Vec enhanced;
  Vec weights;
};

inline std::vector<Vec> contextualized(const acger::Model& m, acger::EntityKind kind,
                                       const Vec& raw, const acger::ContextTuple& c) {
  const auto& p = m.params();
  const auto& L = m.layout();
  std::vector<Vec> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    out.push_back(mlp(p, L.mlp(kind, i), raw, row(p, L.contexts[i], c[i])));
  }
  return out;
}

inline Rep event(const acger::Model& m, std::uint32_t e, const acger::ContextTuple& c) {
  const auto& p = m.params();
  Rep r;
  r.raw = row(p, m.layout().events, e);
  r.ctx = contextualized(m, acger::EntityKind::event, r.raw, c);
  Vec s;
  for (const Vec& x : r.ctx) s.push_back(attention_score(p, m.layout().att(acger::AttentionKind::event), r.raw, x));
  r.weights = softmax(s);
  r.enhanced = weighted(r.weights, r.ctx);
  return r;
}

inline Rep actor(const acger::Model& m, acger::EntityKind kind, std::uint32_t id,
                 const acger::ContextTuple& c, const Rep& ev) {
  const auto& p = m.params();
  const bool user = kind == acger::EntityKind::user;
  Rep r;
  r.raw = row(p, user ? m.layout().users : m.layout().groups, id);
  r.ctx = contextualized(m, kind, r.raw, c);
  const auto& net = m.layout().att(user ? acger::AttentionKind::user : acger::AttentionKind::group);
  Vec s;
  for (std::size_t i = 0; i < r.ctx.size(); ++i) s.push_back(attention_score(p, net, r.ctx[i], ev.ctx[i]));
  r.weights = softmax(s);
  r.enhanced = weighted(r.weights, r.ctx);
  return r;
}

inline Vec concat(Vec a, const Vec& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline double user_score(const acger::Model& m, std::uint32_t u, std::uint32_t e,
                         const acger::ContextTuple& c) {
  const Rep ev = event(m, e, c);
  const Rep a = actor(m, acger::EntityKind::user, u, c, ev);
  return fm(m.params(), m.layout().fm_user, concat(a.enhanced, ev.enhanced));
}

// Members are visited in the given order.
inline double group_score(const acger::Model& m, std::uint32_t g, std::uint32_t e,
                          const acger::ContextTuple& c,
                          const std::vector<std::uint32_t>& order) {
  const auto& p = m.params();
  const Rep ev = event(m, e, c);
  std::vector<Vec> members;
  Vec s;
  for (std::uint32_t u : order) {
    members.push_back(actor(m, acger::EntityKind::user, u, c, ev).enhanced);
    s.push_back(attention_score(p, m.layout().att(acger::AttentionKind::member), members.back(),
                                ev.enhanced));
  }
  Vec fused = weighted(softmax(s), members);
  const Rep direct = actor(m, acger::EntityKind::group, g, c, ev);
  for (std::size_t j = 0; j < fused.size(); ++j) fused[j] += direct.enhanced[j];
  return fm(p, m.layout().fm_group, concat(fused, ev.enhanced));
}

inline double group_score(const acger::Model& m, std::uint32_t g, std::uint32_t e,
                          const acger::ContextTuple& c) {
  return group_score(m, g, e, c, m.members(g));
}

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

}  // namespace oracle
