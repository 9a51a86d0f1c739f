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

#include <cmath>
#include <random>

#include "acger/error.hpp"
#include "acger/gradcheck.hpp"
#include "acger/graph.hpp"
#include "acger/numerics.hpp"
#include "acger/params.hpp"
#include "doctest.h"

using namespace acger;

TEST_SUITE("numerics") {
  TEST_CASE("relu") {
    CHECK(relu(DenseVector{-1.0, 2.0}) == DenseVector{0.0, 2.0});
    CHECK(relu(DenseVector{0.0, 0.0}) == DenseVector{0.0, 0.0});
    CHECK(relu(DenseVector{3.5}) == DenseVector{3.5});
  }

  TEST_CASE("softmax") {
    const DenseVector u = softmax(DenseVector{0, 0, 0, 0});
    for (double w : u) CHECK(w == 0.25);
    CHECK(softmax(DenseVector{-7.25})[0] == 1.0);
    const DenseVector w = softmax(DenseVector{std::log(1.0), std::log(3.0)});
    CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.75).epsilon(1e-15));
    // Large scores must not overflow.
    const DenseVector big = softmax(DenseVector{1000.0, 0.0});
    CHECK(big[0] == 1.0);
    CHECK(big[1] >= 0.0);
    CHECK_THROWS_AS(softmax(DenseVector{}), Error);
  }

  TEST_CASE("affine") {
    CHECK(affine(DenseMatrix::identity(2), DenseVector{1, 2}, DenseVector{0, 0}) ==
          DenseVector{1, 2});
    CHECK(affine(DenseMatrix(2, 2), DenseVector{9, -4}, DenseVector{5, 7}) == DenseVector{5, 7});
    CHECK(affine(DenseMatrix{{1, 1}, {0, 1}}, DenseVector{2, 3}, DenseVector{1, 0}) ==
          DenseVector{6, 3});
    CHECK_THROWS_AS(affine(DenseMatrix(2, 3), DenseVector{1, 2}, DenseVector{0, 0}), Error);
  }

  TEST_CASE("dot, axpy and concat") {
    const DenseVector a{1, 2, 3}, b{4, 5, 6};
    CHECK(dot(a.span(), b.span()) == 32.0);
    DenseVector y{1, 1, 1};
    axpy(2.0, a.span(), y.span());
    CHECK(y == DenseVector{3, 5, 7});
    CHECK(concat(DenseVector{1}, DenseVector{2, 3}) == DenseVector{1, 2, 3});
    CHECK(all_finite(a.span()));
    CHECK_FALSE(all_finite(DenseVector{1.0, NAN}.span()));
  }
}

TEST_SUITE("embeddings") {
  TEST_CASE("lookup extracts rows and checks bounds") {
    ModelParams p;
    const SlotId t = p.add("t", 3, 2, SlotKind::table);
    p[t].value = DenseMatrix{{1, 2}, {3, 4}, {5, 6}};
    CHECK(lookup(p[t], 2) == DenseVector{5, 6});
    CHECK_THROWS_AS(lookup(p[t], 3), Error);
  }

  TEST_CASE("lookup equals the one-hot product") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n01;
    for (int c = 0; c < 100; ++c) {
      const std::size_t rows = 1 + rng() % 12, cols = 1 + rng() % 9;
      ModelParams p;
      const SlotId t = p.add("t", rows, cols, SlotKind::table);
      for (double& x : p[t].value.span()) x = n01(rng);
      const std::size_t id = rng() % rows;
      DenseVector dense(cols, 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        const double onehot = r == id ? 1.0 : 0.0;
        for (std::size_t j = 0; j < cols; ++j) dense[j] += p[t].value(r, j) * onehot;
      }
      CHECK(lookup(p[t], id) == dense);
    }
  }

  TEST_CASE("registry rejects duplicate names") {
    ModelParams p;
    p.add("a", 1, 1);
    CHECK_THROWS_AS(p.add("a", 2, 2), Error);
    CHECK(p.find("a").has_value());
    CHECK_FALSE(p.find("b").has_value());
    CHECK_THROWS_AS(p.at("b"), Error);
  }

  TEST_CASE("gradients track touched rows") {
    ModelParams p;
    const SlotId t = p.add("t", 4, 2, SlotKind::table);
    const SlotId d = p.add("d", 1, 2);
    Gradients g(p);
    g.touch_row(t, 3);
    g.touch_row(t, 1);
    g.touch_row(t, 3);
    g.grad(t)(3, 0) = 1.0;
    CHECK(g.touched(t));
    CHECK_FALSE(g.touched(d));
    CHECK(g.touched_rows(t) == std::vector<std::size_t>{3, 1});
    g.reset();
    CHECK_FALSE(g.touched(t));
    CHECK(g.grad(t)(3, 0) == 0.0);
  }
}

TEST_SUITE("gradcheck") {
  TEST_CASE("central differences are exact on a quadratic") {
    ModelParams p;
    const SlotId s = p.add("theta", 1, 1);
    p[s].value(0, 0) = 3.0;
    const LossFn loss = [s](const ModelParams& q, Gradients* g) {
      const double t = q[s].value(0, 0);
      if (g) {
        g->touch(s);
        g->grad(s)(0, 0) += 2.0 * t;
      }
      return t * t;
    };
    const GradCheckReport r = grad_check(loss, p, 1e-4);
    CHECK(r.max_rel_error() < 1e-9);
    CHECK(p[s].value(0, 0) == 3.0);
  }

  TEST_CASE("constant loss has zero gradient") {
    ModelParams p;
    p.add("theta", 2, 2);
    const LossFn loss = [](const ModelParams&, Gradients*) { return 4.0; };
    CHECK(grad_check(loss, p, 1e-5).max_rel_error() == 0.0);
  }

  TEST_CASE("a wrong gradient is caught") {
    ModelParams p;
    const SlotId s = p.add("theta", 1, 1);
    p[s].value(0, 0) = 1.5;
    const LossFn loss = [s](const ModelParams& q, Gradients* g) {
      const double t = q[s].value(0, 0);
      if (g) {
        g->touch(s);
        g->grad(s)(0, 0) += 2.0 * t + 0.1;
      }
      return t * t;
    };
    CHECK(grad_check(loss, p, 1e-5).max_rel_error() > 1e-3);
  }

  TEST_CASE("relative error floor") {
    CHECK(relative_error(1.0, 1.0) == 0.0);
    CHECK(relative_error(2.0, 1.0) == 0.5);
    CHECK(relative_error(0.0, 1e-12) == doctest::Approx(1e-4));
  }

  TEST_CASE("graph operations against finite differences") {
    // loss = fm([softmax(s) . [relu(Wx+b), relu(W2 x)], x]) through every op.
    std::mt19937_64 rng(11);
    std::normal_distribution<double> n01(0.0, 0.5);
    ModelParams p;
    const SlotId tab = p.add("tab", 3, 3, SlotKind::table);
    const SlotId w = p.add("w", 3, 3), b = p.add("b", 1, 3), w2 = p.add("w2", 3, 3);
    const SlotId proj = p.add("proj", 1, 3);
    const SlotId f0 = p.add("f0", 1, 1), f1 = p.add("f1", 1, 6), fv = p.add("fv", 6, 2);
    for (SlotId i = 0; i < p.size(); ++i) {
      for (double& x : p[i].value.span()) x = n01(rng);
    }
    const LossFn loss = [&](const ModelParams& q, Gradients* g) {
      Graph gr(q, g);
      auto x = gr.lookup(tab, 1);
      auto h1 = gr.relu(gr.affine(w, b, x));
      auto h2 = gr.relu(gr.linear(w2, gr.sub(x, gr.lookup(tab, 2))));
      std::vector<Graph::Var> hs{h1, h2};
      std::vector<Graph::Var> sc{gr.dot_param(proj, h1), gr.dot_param(proj, h2)};
      auto mix = gr.weighted_sum(gr.softmax(gr.stack(sc)), hs);
      auto z = gr.fm(f0, f1, fv, gr.concat(gr.add(mix, x), x));
      auto out = gr.neg_log_sigmoid(z);
      if (g) gr.backward(out);
      return gr.scalar(out);
    };
    CHECK(grad_check(loss, p, 1e-6).max_rel_error() < 1e-6);
  }
}
