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

#include "acger/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "acger/error.hpp"

namespace acger {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw_usage("ragged matrix initializer");
    }
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    m(i, i) = 1.0;
  }
  return m;
}

void DenseMatrix::fill(double v) {
  std::fill(values_.begin(), values_.end(), v);
}

std::string shape_string(const DenseMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

DenseVector relu(const DenseVector& x) {
  DenseVector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[i] = x[i] > 0.0 ? x[i] : 0.0;
  }
  return out;
}

DenseVector softmax(const DenseVector& scores) {
  if (scores.empty()) {
    throw_numeric("empty softmax");
  }
  const double mx = *std::max_element(scores.begin(), scores.end());
  DenseVector out(scores.size());
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    out[i] = std::exp(scores[i] - mx);
    total += out[i];
  }
  for (double& v : out) {
    v /= total;
  }
  return out;
}

DenseVector affine(const DenseMatrix& w, const DenseVector& x, const DenseVector& b) {
  if (w.cols() != x.size() || w.rows() != b.size()) {
    std::ostringstream os;
    os << "affine: weight " << shape_string(w) << " incompatible with input "
       << x.size() << " and bias " << b.size();
    throw_usage(os.str());
  }
  DenseVector out(w.rows());
  for (std::size_t r = 0; r < w.rows(); ++r) {
    out[r] = dot(w.row(r), x.span()) + b[r];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    s += a[i] * b[i];
  }
  return s;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += alpha * x[i];
  }
}

DenseVector concat(const DenseVector& a, const DenseVector& b) {
  DenseVector out(a.size() + b.size());
  std::copy(a.begin(), a.end(), out.begin());
  std::copy(b.begin(), b.end(), out.begin() + static_cast<std::ptrdiff_t>(a.size()));
  return out;
}

double l2_norm(std::span<const double> x) {
  return std::sqrt(dot(x, x));
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace acger
