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

#ifndef EASL_SCHEDULER_H_
#define EASL_SCHEDULER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easl/models.h"

namespace easl {

enum class HitStatus { kPending, kCompleted };

// n distinct items shown together; the anchor is item_ids.front().
struct Hit {
  std::string hit_id;
  int iteration = 0;
  std::string anchor_id;
  std::vector<std::string> item_ids;
  HitStatus status = HitStatus::kPending;
};

struct SchedulerOptions {
  // Defaults to floor(N / n).
  std::optional<int> hits_per_iteration;
  // When false (the default) comparators are drawn only from non-anchors.
  // Setting it lets small collections draw from every item but the anchor.
  bool anchors_as_comparators = false;
  // Stamped into the HITs and their ids.
  int iteration = 0;
};

// Picks the highest-variance items as anchors (ties by item id) and draws
// n - 1 comparators for each, without replacement, with probability
// proportional to match quality against the anchor.
std::vector<Hit> sample_hits(std::span<const InstanceState> states,
                             const ModelConfig& cfg, std::uint64_t seed,
                             const SchedulerOptions& options = {});

// Indices of the top-k states by descending variance, ties by item id.
std::vector<std::size_t> variance_anchors(std::span<const InstanceState> states,
                                          std::size_t k);

struct IterationPlan {
  int hits_per_iteration = 0;
  std::int64_t judgments_per_iteration = 0;
  std::int64_t total_judgments = 0;
  // Judgments per iteration divided by N.
  double coverage_per_iteration = 0.0;
};

IterationPlan iteration_plan(int num_items, int hit_size, int iterations,
                             std::optional<int> hits_per_iteration = {});

}  // namespace easl

#endif  // EASL_SCHEDULER_H_
