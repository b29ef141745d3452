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

#ifndef EASL_STAT_CORE_H_
#define EASL_STAT_CORE_H_

// Statistical kernels shared by every aggregation model: the standard normal
// density and distribution function (with tail-safe ratio forms used by the
// TrueSkill factors) and summaries of the beta distribution.

namespace easl {

// Latent Gaussian score of one item. sigma2 > 0.
struct GaussianParams {
  double mu = 0.0;
  double sigma2 = 1.0;

  friend bool operator==(const GaussianParams&, const GaussianParams&) = default;
};

// Beta shape parameters of one item. Both stay >= 1: they start at 1 and
// every update rule only adds non-negative mass.
struct BetaParams {
  double alpha = 1.0;
  double beta = 1.0;

  friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

double std_normal_pdf(double x);
double std_normal_cdf(double x);

// log Phi(x), finite for every finite x (Phi itself underflows below ~-38).
double log_std_normal_cdf(double x);

// phi(x) / Phi(x). Uses a continued fraction for the Mills ratio in the lower
// tail so the quotient never degenerates into 0/0.
double normal_pdf_cdf_ratio(double x);

// Mills ratio (1 - Phi(z)) / phi(z) for z >= 0.
double mills_ratio(double z);

double beta_mode(const BetaParams& p);
double beta_variance(const BetaParams& p);

}  // namespace easl

#endif  // EASL_STAT_CORE_H_
