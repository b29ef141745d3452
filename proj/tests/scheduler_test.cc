// Copyright 2026 The EASL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "easl/scheduler.h"

#include <gtest/gtest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace easl {
namespace {

std::vector<InstanceState> uniform_states(int n, const ModelConfig& cfg) {
  std::vector<InstanceState> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(initial_state("x" + std::to_string(100 + i), cfg));
  }
  return out;
}

// Items with spread modes and decreasing variance in index order.
std::vector<InstanceState> spread_states(int n) {
  std::vector<InstanceState> out;
  for (int i = 0; i < n; ++i) {
    const double mass = 2.0 + i;
    const double mode = static_cast<double>(i) / (n - 1);
    // Mode (a-1)/(a+b-2) = mode with a + b - 2 = mass.
    out.push_back(InstanceState{"x" + std::to_string(100 + i),
                                BetaParams{1 + mode * mass,
                                           1 + (1 - mode) * mass},
                                0});
  }
  return out;
}

void check_hit_shape(const std::vector<Hit>& hits, std::size_t n) {
  for (const auto& h : hits) {
    ASSERT_EQ(h.item_ids.size(), n);
    ASSERT_EQ(h.item_ids.front(), h.anchor_id);
    std::set<std::string> distinct(h.item_ids.begin(), h.item_ids.end());
    ASSERT_EQ(distinct.size(), n);
    ASSERT_EQ(h.status, HitStatus::kPending);
  }
}

TEST(SampleHits, TenItemsTwoHits) {
  ModelConfig cfg;
  const auto states = spread_states(10);
  const auto hits = sample_hits(states, cfg, 1);
  ASSERT_EQ(hits.size(), 2u);
  check_hit_shape(hits, 5);
  // Variance is highest at index 0 and decreases with mass.
  EXPECT_EQ(hits[0].anchor_id, "x100");
  EXPECT_EQ(hits[1].anchor_id, "x101");
  EXPECT_EQ(hits[0].hit_id, "it0-h0");
  for (const auto& h : hits) {
    for (std::size_t k = 1; k < h.item_ids.size(); ++k) {
      EXPECT_NE(h.item_ids[k], "x100");
      EXPECT_NE(h.item_ids[k], "x101");
    }
  }
}

TEST(SampleHits, FloorOfNOverN) {
  ModelConfig cfg;
  for (int n_items : {10, 11, 14, 150, 151}) {
    const auto hits = sample_hits(uniform_states(n_items, cfg), cfg, 3);
    EXPECT_EQ(static_cast<int>(hits.size()), n_items / 5) << n_items;
    check_hit_shape(hits, 5);
  }
  SchedulerOptions opts;
  opts.hits_per_iteration = 20;
  opts.iteration = 4;
  const auto hits = sample_hits(uniform_states(150, cfg), cfg, 3, opts);
  EXPECT_EQ(hits.size(), 20u);
  EXPECT_EQ(hits.back().hit_id, "it4-h19");
  EXPECT_EQ(hits.back().iteration, 4);
}

TEST(SampleHits, DeterministicGivenSeed) {
  ModelConfig cfg;
  const auto states = spread_states(40);
  const auto a = sample_hits(states, cfg, 77);
  const auto b = sample_hits(states, cfg, 77);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].item_ids, b[i].item_ids);
  }
  const auto c = sample_hits(states, cfg, 78);
  bool differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    differs = differs || a[i].item_ids != c[i].item_ids;
  }
  EXPECT_TRUE(differs);
}

TEST(SampleHits, Errors) {
  ModelConfig cfg;
  EXPECT_THROW(sample_hits(std::vector<InstanceState>{}, cfg, 1),
               std::invalid_argument);
  EXPECT_THROW(sample_hits(uniform_states(4, cfg), cfg, 1),
               std::invalid_argument);
  // Six items and three anchors leave three comparators for n - 1 = 4.
  SchedulerOptions opts;
  opts.hits_per_iteration = 3;
  EXPECT_THROW(sample_hits(uniform_states(6, cfg), cfg, 1, opts),
               std::invalid_argument);
  opts.anchors_as_comparators = true;
  const auto hits = sample_hits(uniform_states(6, cfg), cfg, 1, opts);
  check_hit_shape(hits, 5);
}

TEST(VarianceAnchors, TopKWithIdTieBreak) {
  ModelConfig cfg;
  auto states = uniform_states(6, cfg);
  // All equal: ids decide.
  EXPECT_EQ(variance_anchors(states, 2), (std::vector<std::size_t>{0, 1}));
  states[4].params = BetaParams{1, 1};
  states[0].params = BetaParams{5, 5};
  states[1].params = BetaParams{3, 2};
  const auto top = variance_anchors(states, 3);
  EXPECT_EQ(top, (std::vector<std::size_t>{2, 3, 4}));
}

// Chi-squared goodness of fit of comparator frequencies for one anchor
// against match-quality weights normalized over the pool.
double comparator_fit_p_value(const std::vector<InstanceState>& states,
                              int draws) {
  ModelConfig cfg;
  cfg.n = 2;
  SchedulerOptions opts;
  opts.hits_per_iteration = 1;
  std::map<std::string, int> counts;
  std::string anchor;
  for (int s = 0; s < draws; ++s) {
    const auto hits = sample_hits(states, cfg, 1000 + s, opts);
    anchor = hits[0].anchor_id;
    ++counts[hits[0].item_ids[1]];
  }
  const InstanceState* a = nullptr;
  for (const auto& st : states) {
    if (st.item_id == anchor) a = &st;
  }
  double total = 0.0;
  std::vector<std::pair<std::string, double>> weights;
  for (const auto& st : states) {
    if (st.item_id == anchor) continue;
    const double w = match_quality(*a, st, cfg.gamma);
    weights.emplace_back(st.item_id, w);
    total += w;
  }
  double chi2 = 0.0;
  for (const auto& [id, w] : weights) {
    const double expected = draws * w / total;
    const double diff = counts[id] - expected;
    chi2 += diff * diff / expected;
  }
  boost::math::chi_squared dist(static_cast<double>(weights.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, chi2));
}

TEST(SampleHits, ComparatorFrequenciesFollowMatchQuality) {
  EXPECT_GT(comparator_fit_p_value(spread_states(12), 10000), 0.01);
}

TEST(SampleHits, UniformWhenStatesIdentical) {
  ModelConfig cfg;
  EXPECT_GT(comparator_fit_p_value(uniform_states(12, cfg), 10000), 0.01);
}

TEST(SampleHits, NearComparatorsPreferred) {
  ModelConfig cfg;
  const auto states = spread_states(12);
  SchedulerOptions opts;
  opts.hits_per_iteration = 1;
  std::map<std::string, int> counts;
  for (int s = 0; s < 2000; ++s) {
    const auto hits = sample_hits(states, cfg, s, opts);
    for (const auto& id : hits[0].item_ids) ++counts[id];
  }
  // Anchor x100 has mode 0; x101 is adjacent, x111 is the far end.
  EXPECT_GT(counts["x101"], counts["x111"]);
}

TEST(IterationPlan, Arithmetic) {
  auto p = iteration_plan(10, 5, 1);
  EXPECT_EQ(p.hits_per_iteration, 2);
  EXPECT_EQ(p.total_judgments, 10);
  p = iteration_plan(150, 5, 10);
  EXPECT_EQ(p.hits_per_iteration, 30);
  EXPECT_EQ(p.total_judgments, 1500);
  p = iteration_plan(150, 5, 1, 20);
  EXPECT_EQ(p.judgments_per_iteration, 100);
  EXPECT_NEAR(p.coverage_per_iteration, 2.0 / 3.0, 1e-15);
  EXPECT_THROW(iteration_plan(0, 5, 1), std::invalid_argument);
}

}  // namespace
}  // namespace easl
