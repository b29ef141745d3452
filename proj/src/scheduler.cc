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

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace easl {

std::vector<std::size_t> variance_anchors(std::span<const InstanceState> states,
                                          std::size_t k) {
  std::vector<double> var(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    var[i] = current_variance(states[i]);
  }
  std::vector<std::size_t> order(states.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (var[a] != var[b]) return var[a] > var[b];
    return states[a].item_id < states[b].item_id;
  });
  order.resize(std::min(k, order.size()));
  return order;
}

std::vector<Hit> sample_hits(std::span<const InstanceState> states,
                             const ModelConfig& cfg, std::uint64_t seed,
                             const SchedulerOptions& options) {
  if (states.empty()) throw std::invalid_argument("sample_hits: no items");
  const std::size_t n_items = states.size();
  if (cfg.n < 2) throw std::invalid_argument("sample_hits: n must be >= 2");
  const auto n = static_cast<std::size_t>(cfg.n);
  if (n_items < n) {
    throw std::invalid_argument("sample_hits: fewer items than the HIT size");
  }
  const std::size_t k =
      options.hits_per_iteration
          ? static_cast<std::size_t>(std::max(0, *options.hits_per_iteration))
          : n_items / n;
  if (k < 1 || k > n_items) {
    throw std::invalid_argument("sample_hits: hits per iteration out of range");
  }

  const auto anchors = variance_anchors(states, k);
  std::vector<bool> is_anchor(n_items, false);
  for (std::size_t a : anchors) is_anchor[a] = true;
  if (!options.anchors_as_comparators && n_items - k < n - 1) {
    throw std::invalid_argument(
        "sample_hits: comparator pool smaller than n - 1; allow anchors as "
        "comparators or lower hits per iteration");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Hit> hits;
  hits.reserve(k);
  std::vector<std::size_t> pool;
  std::vector<double> weight;
  for (std::size_t h = 0; h < anchors.size(); ++h) {
    const std::size_t a = anchors[h];
    pool.clear();
    weight.clear();
    for (std::size_t j = 0; j < n_items; ++j) {
      if (j == a) continue;
      if (is_anchor[j] && !options.anchors_as_comparators) continue;
      pool.push_back(j);
      weight.push_back(match_quality(states[a], states[j], cfg.gamma));
    }

    Hit hit;
    hit.iteration = options.iteration;
    hit.hit_id =
        "it" + std::to_string(options.iteration) + "-h" + std::to_string(h);
    hit.anchor_id = states[a].item_id;
    hit.item_ids.push_back(states[a].item_id);
    std::vector<bool> taken(pool.size(), false);
    for (std::size_t draw = 0; draw + 1 < n; ++draw) {
      double total = 0.0;
      std::size_t live = 0;
      for (std::size_t j = 0; j < pool.size(); ++j) {
        if (taken[j]) continue;
        total += weight[j];
        ++live;
      }
      std::size_t chosen = pool.size();
      if (total > 0.0) {
        const double u = unit(rng) * total;
        double acc = 0.0;
        for (std::size_t j = 0; j < pool.size(); ++j) {
          if (taken[j] || weight[j] <= 0.0) continue;
          chosen = j;
          acc += weight[j];
          if (u < acc) break;
        }
      } else {
        // Every remaining weight underflowed; fall back to uniform.
        auto target = static_cast<std::size_t>(unit(rng) * live);
        for (std::size_t j = 0; j < pool.size(); ++j) {
          if (taken[j]) continue;
          chosen = j;
          if (target-- == 0) break;
        }
      }
      taken[chosen] = true;
      hit.item_ids.push_back(states[pool[chosen]].item_id);
    }
    hits.push_back(std::move(hit));
  }
  return hits;
}

IterationPlan iteration_plan(int num_items, int hit_size, int iterations,
                             std::optional<int> hits_per_iteration) {
  if (num_items < 1 || hit_size < 1 || iterations < 0) {
    throw std::invalid_argument("iteration_plan: non-positive sizes");
  }
  IterationPlan plan;
  plan.hits_per_iteration = hits_per_iteration.value_or(num_items / hit_size);
  plan.judgments_per_iteration =
      static_cast<std::int64_t>(plan.hits_per_iteration) * hit_size;
  plan.total_judgments = plan.judgments_per_iteration * iterations;
  plan.coverage_per_iteration =
      static_cast<double>(plan.judgments_per_iteration) / num_items;
  return plan;
}

}  // namespace easl
