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

#include "easl/stat_core.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace easl {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Below this point Phi is evaluated through the Mills ratio.
constexpr double kLowerTail = -6.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

void require_beta_domain(const BetaParams& p, const char* what) {
  if (!(p.alpha >= 1.0) || !(p.beta >= 1.0) || !std::isfinite(p.alpha) ||
      !std::isfinite(p.beta)) {
    throw std::invalid_argument(std::string(what) +
                                ": beta parameters must be finite and >= 1");
  }
}

}  // namespace

double std_normal_pdf(double x) {
  require_finite(x, "std_normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  require_finite(x, "std_normal_cdf");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double mills_ratio(double z) {
  require_finite(z, "mills_ratio");
  if (z < 0.0) throw std::invalid_argument("mills_ratio: z must be >= 0");
  if (z < 6.0) {
    return 0.5 * std::erfc(z / std::numbers::sqrt2) / std_normal_pdf(z);
  }
  // R(z) = 1/(z+ 1/(z+ 2/(z+ 3/(z+ ...)))), modified Lentz.
  constexpr double kTiny = 1e-300;
  double f = z;
  double c = z;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = z + k * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = z + k / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double log_std_normal_cdf(double x) {
  require_finite(x, "log_std_normal_cdf");
  if (x >= kLowerTail) return std::log(std_normal_cdf(x));
  // Phi(x) = phi(x) * R(-x)
  return -0.5 * x * x - kLogSqrt2Pi + std::log(mills_ratio(-x));
}

double normal_pdf_cdf_ratio(double x) {
  require_finite(x, "normal_pdf_cdf_ratio");
  if (x >= kLowerTail) return std_normal_pdf(x) / std_normal_cdf(x);
  return 1.0 / mills_ratio(-x);
}

double beta_mode(const BetaParams& p) {
  require_beta_domain(p, "beta_mode");
  const double denom = p.alpha + p.beta - 2.0;
  if (denom <= 0.0) return 0.5;
  // (a - 1) / ((a + b) - 2) can round past 1 when b == 1.
  return std::clamp((p.alpha - 1.0) / denom, 0.0, 1.0);
}

double beta_variance(const BetaParams& p) {
  require_beta_domain(p, "beta_variance");
  const double s = p.alpha + p.beta;
  return p.alpha * p.beta / (s * s * (s + 1.0));
}

}  // namespace easl
