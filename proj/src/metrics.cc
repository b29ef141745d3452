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

#include "easl/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace easl {
namespace {

void check_pair(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("correlation: length mismatch");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("correlation: need at least two points");
  }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
    // Positions i..j-1 (0-based) share rank (i + 1 + j) / 2.
    const double r = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = r;
    i = j;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> xs,
                              std::span<const double> ys) {
  check_pair(xs, ys);
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> xs,
                               std::span<const double> ys) {
  check_pair(xs, ys);
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  return pearson(rx, ry);
}

std::optional<CorrelationResult> bootstrap_ci(std::span<const double> xs,
                                              std::span<const double> ys,
                                              const CorrelationFn& statistic,
                                              int resamples, double level,
                                              std::uint64_t seed) {
  check_pair(xs, ys);
  if (resamples < 1) throw std::invalid_argument("bootstrap: resamples < 1");
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("bootstrap: level must lie in (0, 1)");
  }
  const auto point = statistic(xs, ys);
  if (!point) return std::nullopt;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
  std::vector<double> bx(xs.size());
  std::vector<double> by(ys.size());
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  CorrelationResult out;
  out.point = *point;
  out.resamples = resamples;
  for (int r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const std::size_t k = pick(rng);
      bx[i] = xs[k];
      by[i] = ys[k];
    }
    if (auto s = statistic(bx, by)) {
      stats.push_back(*s);
    } else {
      ++out.skipped;
    }
  }
  if (stats.empty()) {
    out.ci_low = out.ci_high = out.point;
    return out;
  }
  const double tail = 0.5 * (1.0 - level);
  out.ci_low = std::min(quantile(stats, tail), out.point);
  out.ci_high = std::max(quantile(stats, 1.0 - tail), out.point);
  return out;
}

std::vector<std::int64_t> bin_histogram(std::span<const double> values,
                                        int bins) {
  if (bins < 1) throw std::invalid_argument("bin_histogram: bins < 1");
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins), 0);
  for (double v : values) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("bin_histogram: value outside [0, 1]");
    }
    auto b = static_cast<int>(std::floor(v * bins));
    ++counts[static_cast<std::size_t>(std::min(b, bins - 1))];
  }
  return counts;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile: q outside [0, 1]");
  }
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double h = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

double interdecile_range(std::span<const double> values) {
  return quantile(values, 0.9) - quantile(values, 0.1);
}

double total_variation(std::span<const std::int64_t> a,
                       std::span<const std::int64_t> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("total_variation: bin count mismatch");
  }
  const double ta = static_cast<double>(std::accumulate(a.begin(), a.end(),
                                                        std::int64_t{0}));
  const double tb = static_cast<double>(std::accumulate(b.begin(), b.end(),
                                                        std::int64_t{0}));
  if (ta <= 0.0 || tb <= 0.0) {
    throw std::invalid_argument("total_variation: empty histogram");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d += std::fabs(static_cast<double>(a[i]) / ta -
                   static_cast<double>(b[i]) / tb);
  }
  return 0.5 * d;
}

}  // namespace easl
