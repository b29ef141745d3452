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

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.h"

namespace easl {
namespace {

// Random vectors with a share of deliberately repeated values.
std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n,
                                  bool ties) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> level(0, 4);
  std::vector<double> v(n);
  for (auto& x : v) x = ties ? level(rng) / 4.0 : u(rng);
  return v;
}

TEST(AverageRanks, TiesShareMeanPosition) {
  const std::vector<double> xs = {0.3, 0.1, 0.3, 0.9, 0.3};
  EXPECT_EQ(average_ranks(xs), (std::vector<double>{3, 1, 3, 5, 3}));
}

TEST(Correlation, MatchesBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::size_t> len(2, 50);
  int checked = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = len(rng);
    const bool ties = k % 3 == 0;
    const auto x = random_vector(rng, n, ties);
    const auto y = random_vector(rng, n, ties && k % 2 == 0);
    const auto p = pearson(x, y);
    const auto s = spearman(x, y);
    const auto rp = oracle::pearson(x, y);
    const auto rs = oracle::spearman(x, y);
    ASSERT_EQ(p.has_value(), rp.has_value());
    ASSERT_EQ(s.has_value(), rs.has_value());
    if (p) {
      ASSERT_NEAR(*p, static_cast<double>(*rp), 1e-12);
      ++checked;
    }
    if (s) {
      ASSERT_NEAR(*s, static_cast<double>(*rs), 1e-12);
    }
  }
  EXPECT_GT(checked, 900);
}

TEST(Correlation, EdgeCases) {
  const std::vector<double> a = {1, 2, 3}, b = {2, 4, 6}, c = {5, 5, 5};
  EXPECT_DOUBLE_EQ(*pearson(a, b), 1.0);
  EXPECT_DOUBLE_EQ(*spearman(a, std::vector<double>{3, 2, 1}), -1.0);
  EXPECT_FALSE(pearson(a, c).has_value());
  EXPECT_FALSE(spearman(c, a).has_value());
  EXPECT_THROW(pearson(a, std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(spearman(std::vector<double>{1}, std::vector<double>{1}),
               std::invalid_argument);
}

TEST(BootstrapCi, ContainsPointAndIsDeterministic) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n(0, 1);
  std::vector<double> x(60), y(60);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = n(rng);
    y[i] = 0.6 * x[i] + 0.8 * n(rng);
  }
  const auto r = bootstrap_ci(x, y, spearman, 200, 0.95, 5);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->point, *spearman(x, y));
  EXPECT_LE(r->ci_low, r->point);
  EXPECT_GE(r->ci_high, r->point);
  EXPECT_LT(r->ci_high - r->ci_low, 0.6);
  EXPECT_EQ(r->resamples, 200);
  const auto again = bootstrap_ci(x, y, spearman, 200, 0.95, 5);
  EXPECT_EQ(again->ci_low, r->ci_low);
  EXPECT_EQ(again->ci_high, r->ci_high);

  const std::vector<double> flat(x.size(), 0.5);
  EXPECT_FALSE(bootstrap_ci(flat, x, pearson, 50, 0.95, 1).has_value());
}

TEST(BinHistogram, FiveBinsClosedTop) {
  const std::vector<double> v = {0.0, 0.19999, 0.2, 0.5, 0.79, 0.8, 1.0};
  EXPECT_EQ(bin_histogram(v), (std::vector<std::int64_t>{2, 1, 1, 1, 2}));
  EXPECT_THROW(bin_histogram(std::vector<double>{1.2}), std::invalid_argument);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v = {4, 1, 3, 2, 5};
  EXPECT_EQ(quantile(v, 0.0), 1);
  EXPECT_EQ(quantile(v, 1.0), 5);
  EXPECT_EQ(quantile(v, 0.5), 3);
  EXPECT_DOUBLE_EQ(quantile(v, 0.1), 1.4);
  EXPECT_DOUBLE_EQ(interdecile_range(v), 3.2);
}

TEST(TotalVariation, HalfL1OfNormalized) {
  const std::vector<std::int64_t> a = {1, 1, 0, 0, 0}, b = {0, 0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(total_variation(a, b), 1.0);
  EXPECT_DOUBLE_EQ(total_variation(a, a), 0.0);
  const std::vector<std::int64_t> c = {2, 0, 0, 0, 2};
  EXPECT_DOUBLE_EQ(total_variation(a, c), 0.5);
}

}  // namespace
}  // namespace easl
