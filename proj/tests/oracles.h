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


#ifndef EASL_TESTS_ORACLES_H_
#define EASL_TESTS_ORACLES_H_

// Reference implementations written from the definitions, in long double and
// without the numerical shortcuts of the library code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <vector>

namespace easl::oracle {

inline long double pdf(long double x) {
  constexpr long double kPi = std::numbers::pi_v<long double>;
  return std::exp(-x * x / 2.0L) / std::sqrt(2.0L * kPi);
}

// Composite Simpson on [0, |x|] plus the half mass.
inline long double cdf_simpson(long double x, int intervals = 200000) {
  const long double a = std::fabs(x);
  const long double h = a / intervals;
  long double sum = pdf(0.0L) + pdf(a);
  for (int k = 1; k < intervals; ++k) {
    sum += (k % 2 == 1 ? 4.0L : 2.0L) * pdf(k * h);
  }
  const long double half = sum * h / 3.0L;
  return x >= 0 ? 0.5L + half : 0.5L - half;
}

inline long double cdf(long double x) {
  return 0.5L * std::erfc(-x / std::sqrt(2.0L));
}

inline long double upper_tail(long double x) {
  return 0.5L * std::erfc(x / std::sqrt(2.0L));
}

// Phi(hi) - Phi(lo) for hi > lo, using whichever tail avoids cancellation.
inline long double cdf_diff(long double hi, long double lo) {
  if (lo > 0) return upper_tail(lo) - upper_tail(hi);
  return cdf(hi) - cdf(lo);
}

inline long double v_win(long double t, long double eps) {
  return pdf(t - eps) / cdf(t - eps);
}

inline long double w_win(long double t, long double eps) {
  const long double v = v_win(t, eps);
  return v * (v + t - eps);
}

inline long double v_tie(long double t, long double eps) {
  return (pdf(-eps - t) - pdf(eps - t)) / cdf_diff(eps - t, -eps - t);
}

inline long double w_tie(long double t, long double eps) {
  const long double v = v_tie(t, eps);
  return v * v + ((eps - t) * pdf(eps - t) + (eps + t) * pdf(eps + t)) /
                     cdf_diff(eps - t, -eps - t);
}

struct Triple {
  long double win, tie, loss;
};

inline Triple rao_kupper(long double mi, long double mj, long double eps) {
  const long double th = std::exp(eps);
  const long double pi = std::exp(mi);
  const long double pj = std::exp(mj);
  return {pi / (pi + th * pj), (th * th - 1) * pi * pj /
                                   ((pi + th * pj) * (th * pi + pj)),
          pj / (th * pi + pj)};
}

// Rank by counting: 1 + (#smaller) + (#equal - 1) / 2.
inline std::vector<long double> count_ranks(const std::vector<double>& xs) {
  std::vector<long double> r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::size_t less = 0, equal = 0;
    for (double y : xs) {
      if (y < xs[i]) ++less;
      if (y == xs[i]) ++equal;
    }
    r[i] = 1.0L + less + (equal - 1) / 2.0L;
  }
  return r;
}

inline std::optional<long double> pearson(const std::vector<long double>& x,
                                          const std::vector<long double>& y) {
  const std::size_t n = x.size();
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return sxy / std::sqrt(sxx * syy);
}

inline std::optional<long double> pearson(const std::vector<double>& x,
                                          const std::vector<double>& y) {
  return pearson(std::vector<long double>(x.begin(), x.end()),
                 std::vector<long double>(y.begin(), y.end()));
}

inline std::optional<long double> spearman(const std::vector<double>& x,
                                           const std::vector<double>& y) {
  return pearson(count_ranks(x), count_ranks(y));
}

}  // namespace easl::oracle

#endif  // EASL_TESTS_ORACLES_H_
