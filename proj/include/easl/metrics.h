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

#ifndef EASL_METRICS_H_
#define EASL_METRICS_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace easl {

// Ranks starting at 1; tied values share the average of their positions.
std::vector<double> average_ranks(std::span<const double> xs);

// Both return nullopt when either input is constant (correlation undefined).
// Length mismatch or fewer than two points throws std::invalid_argument.
std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys);
std::optional<double> spearman(std::span<const double> xs,
                               std::span<const double> ys);

using CorrelationFn = std::function<std::optional<double>(
    std::span<const double>, std::span<const double>)>;

struct CorrelationResult {
  double point = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int resamples = 0;
  // Resamples whose statistic was undefined (constant vector) and dropped.
  int skipped = 0;
};

// Percentile bootstrap over (x, y) pairs. The interval is widened to contain
// the full-sample point estimate when the percentiles miss it. nullopt when
// the full-sample statistic itself is undefined.
std::optional<CorrelationResult> bootstrap_ci(std::span<const double> xs,
                                              std::span<const double> ys,
                                              const CorrelationFn& statistic,
                                              int resamples, double level,
                                              std::uint64_t seed);

// Equal-width bins over [0, 1]; the last bin is closed on the right.
std::vector<std::int64_t> bin_histogram(std::span<const double> values,
                                        int bins = 5);

// Linear-interpolated sample quantile, q in [0, 1].
double quantile(std::span<const double> values, double q);

// Q(0.9) - Q(0.1).
double interdecile_range(std::span<const double> values);

// Half the L1 distance between two histograms normalized to unit mass.
double total_variation(std::span<const std::int64_t> a,
                       std::span<const std::int64_t> b);

}  // namespace easl

#endif  // EASL_METRICS_H_
