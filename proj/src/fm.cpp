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

#include "acger/fm.hpp"

#include "acger/error.hpp"

namespace acger {

namespace {

void check_shapes(const DenseVector& x, const FmParams& fm) {
  if (fm.w1.size() != x.size() || fm.v.rows() != x.size() || fm.v.cols() < 1) {
    throw_usage("fm: input length " + std::to_string(x.size()) + " incompatible with linear " +
                std::to_string(fm.w1.size()) + " and factors " + shape_string(fm.v));
  }
}

}  // namespace

FmParams fm_params(const ModelParams& params, const FmSlots& slots) {
  FmParams fm;
  fm.w0 = params[slots.w0].value(0, 0);
  const auto w1 = params[slots.w1].value.span();
  fm.w1 = DenseVector(std::vector<double>(w1.begin(), w1.end()));
  fm.v = params[slots.v].value;
  return fm;
}

double fm_score(const DenseVector& x, const FmParams& fm) {
  check_shapes(x, fm);
  double out = fm.w0 + dot(fm.w1.span(), x.span());
  double pair = 0.0;
  for (std::size_t c = 0; c < fm.v.cols(); ++c) {
    double s = 0.0;
    double sq = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double vx = fm.v(j, c) * x[j];
      s += vx;
      sq += vx * vx;
    }
    pair += s * s - sq;
  }
  return out + 0.5 * pair;
}

double fm_score_naive(const DenseVector& x, const FmParams& fm) {
  check_shapes(x, fm);
  double out = fm.w0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out += fm.w1[i] * x[i];
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      double vij = 0.0;
      for (std::size_t c = 0; c < fm.v.cols(); ++c) {
        vij += fm.v(i, c) * fm.v(j, c);
      }
      out += vij * x[i] * x[j];
    }
  }
  return out;
}

double predict(const DenseVector& actor, const DenseVector& event, const FmParams& fm) {
  if (actor.size() != event.size()) {
    throw_usage("predict: actor and event vectors differ in length");
  }
  return fm_score(concat(actor, event), fm);
}

}  // namespace acger
