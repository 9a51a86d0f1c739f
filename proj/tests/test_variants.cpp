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

#include <set>

#include "acger/diagnostics.hpp"
#include "acger/error.hpp"
#include "acger/graph.hpp"
#include "acger/pipeline.hpp"
#include "acger/scoring.hpp"
#include "acger/toy.hpp"
#include "doctest.h"

using namespace acger;

namespace {

struct Probe {
  std::vector<double> actor_weights;
  std::vector<double> event_weights;
  std::vector<double> member_weights;
  double user_score = 0.0;
  double group_score = 0.0;
};

Probe probe(const Model& m, std::uint32_t u, std::uint32_t e, const ContextTuple& c) {
  Probe p;
  Graph g(m.params(), nullptr);
  Forward f(m, g);
  const EventRep ev = f.event(e, c);
  if (ev.weights) p.event_weights = g.value(*ev.weights);
  const ActorRep a = f.user(u, c, ev);
  if (a.weights) p.actor_weights = g.value(*a.weights);
  p.user_score = g.scalar(f.user_score(u, ev, c));
  if (!m.variant().score_level_aggregation()) {
    const GroupRep gr = f.group(0, c, ev);
    if (gr.member_weights) p.member_weights = g.value(*gr.member_weights);
    p.group_score = g.scalar(f.group_score(0, ev, c));
  }
  return p;
}

}  // namespace

TEST_SUITE("variants") {
  TEST_CASE("presets and labels") {
    CHECK(variant_labels().size() == 13);
    for (const auto& label : variant_labels()) {
      CHECK_NOTHROW(variant_preset(label).validate());
    }
    CHECK(variant_preset("ACGER") == VariantConfig{});
    CHECK(variant_preset("ACGER2").context == ContextWeighting::none);
    CHECK_FALSE(variant_preset("ACGER_Grp").individual_task);
    CHECK_THROWS_AS(variant_preset("ACGER3"), Error);
    CHECK(parse_aggregation(to_string(Aggregation::most_pleasure)) == Aggregation::most_pleasure);
    CHECK_THROWS_AS(parse_preference("neither"), Error);
  }

  TEST_CASE("incoherent combinations are rejected") {
    VariantConfig v;
    v.aggregation = Aggregation::borda;
    v.preference = Preference::direct_only;
    CHECK_THROWS_AS(v.validate(), Error);
    v.aggregation = Aggregation::most_pleasure;
    CHECK_THROWS_AS(v.validate(), Error);
    v.aggregation = Aggregation::attention;
    CHECK_NOTHROW(v.validate());
  }

  TEST_CASE("default configuration is the full model") {
    const ToyInstance toy = make_toy_instance();
    const ToyInstance acger = make_toy_instance(variant_preset("ACGER"));
    const Model a = make_toy_model(toy, 5), b = make_toy_model(acger, 5);
    for (std::uint32_t e = 0; e < 6; ++e) {
      const ContextTuple& c = toy.catalog.context(e);
      CHECK(probe(a, 1, e, c).group_score == probe(b, 1, e, c).group_score);
    }
  }

  TEST_CASE("avg weighting is exactly uniform") {
    const ToyInstance toy = make_toy_instance(variant_preset("Avg_ACGER2"));
    const Model m = make_toy_model(toy, 6);
    const Probe p = probe(m, 0, 2, toy.catalog.context(2));
    for (double w : p.actor_weights) CHECK(w == 1.0 / 3.0);
    for (double w : p.event_weights) CHECK(w == 1.0 / 3.0);
    const auto recs = attention_weights(m, {}, AttentionTarget::context);
    CHECK(recs.empty());
  }

  TEST_CASE("ain weights ignore the candidate event") {
    const ToyInstance toy = make_toy_instance(variant_preset("AIN_ACGER2"));
    const Model m = make_toy_model(toy, 7);
    const ContextTuple c{1, 2, 99};
    const Probe base = probe(m, 3, 0, c);
    for (std::uint32_t e = 1; e < 6; ++e) CHECK(probe(m, 3, e, c).actor_weights == base.actor_weights);
    // The full model does depend on the event.
    const ToyInstance full = make_toy_instance();
    const Model f = make_toy_model(full, 7);
    std::set<std::vector<double>> distinct;
    for (std::uint32_t e = 0; e < 6; ++e) distinct.insert(probe(f, 3, e, c).actor_weights);
    CHECK(distinct.size() > 1);
  }

  TEST_CASE("single-sided context") {
    const ContextTuple c{3, 1, 12};
    const Model su = make_toy_model(make_toy_instance(variant_preset("SingleU_ACGER2")), 8);
    const Probe pu = probe(su, 1, 4, c);
    CHECK(pu.event_weights.empty());
    CHECK(pu.actor_weights.size() == 3);
    const Model se = make_toy_model(make_toy_instance(variant_preset("SingleE_ACGER2")), 8);
    const Probe pe = probe(se, 1, 4, c);
    CHECK(pe.actor_weights.empty());
    CHECK(pe.event_weights.size() == 3);
    const Model none = make_toy_model(make_toy_instance(variant_preset("ACGER2")), 8);
    const Probe pn = probe(none, 1, 4, c);
    CHECK(pn.actor_weights.empty());
    CHECK(pn.event_weights.empty());
  }

  TEST_CASE("member aggregation strategies") {
    const ContextTuple c{0, 1, 30};
    const ToyInstance avg = make_toy_instance(variant_preset("ACGER1_Avg"));
    CHECK(probe(make_toy_model(avg, 9), 0, 1, c).member_weights ==
          std::vector<double>(3, 1.0 / 3.0));
    // Expertise counts 3, 1, 2 for members 0, 1, 2.
    const ToyInstance exp = make_toy_instance(variant_preset("ACGER1_Exp"));
    const auto w = probe(make_toy_model(exp, 9), 0, 1, c).member_weights;
    REQUIRE(w.size() == 3);
    CHECK(w[0] == doctest::Approx(0.5));
    CHECK(w[1] == doctest::Approx(1.0 / 6.0));
    CHECK(w[2] == doctest::Approx(1.0 / 3.0));
  }

  TEST_CASE("score-level aggregation") {
    const ToyInstance bc = make_toy_instance(variant_preset("ACGER1_BC"));
    const Model m = make_toy_model(bc, 10);
    const std::vector<std::uint32_t> cand{0, 1, 2, 3, 4, 5};
    const auto policy = ContextPolicy::per_event(m.catalog(), {});
    std::vector<std::vector<double>> per_member;
    for (std::uint32_t u : m.members(0)) per_member.push_back(score_candidates(m, ActorKind::user, u, cand, policy));
    CHECK(score_candidates(m, ActorKind::group, 0, cand, policy) == borda_combine(per_member, cand));

    Model mp = make_toy_model(make_toy_instance(variant_preset("ACGER1_MP")), 10);
    const auto best = score_candidates(mp, ActorKind::group, 0, cand, policy);
    for (std::size_t i = 0; i < cand.size(); ++i) {
      CHECK(best[i] == std::max({per_member[0][i], per_member[1][i], per_member[2][i]}));
    }
  }

  TEST_CASE("preference switches") {
    const ContextTuple c{2, 2, 80};
    Model direct = make_toy_model(make_toy_instance(variant_preset("ACGER_G")), 11);
    Graph g(direct.params(), nullptr);
    Forward f(direct, g);
    const EventRep ev = f.event(5, c);
    const GroupRep gr = f.group(0, c, ev);
    CHECK_FALSE(gr.indirect.has_value());
    CHECK(g.value(gr.fused) == g.value(gr.direct->enhanced));
  }
}
