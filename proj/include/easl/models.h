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

#ifndef EASL_MODELS_H_
#define EASL_MODELS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "easl/stat_core.h"

namespace easl {

enum class Method { kDa, kRaGaussian, kRaBeta, kEasl };

// "da", "ra-gaussian", "ra-beta", "easl".
std::string_view method_name(Method m);
Method parse_method(std::string_view name);

struct ModelInit {
  double alpha = 1.0;
  double beta = 1.0;
  double mu = 0.5;
  double sigma2 = 1.0 / 12.0;

  friend bool operator==(const ModelInit&, const ModelInit&) = default;
};

struct ModelConfig {
  Method method = Method::kEasl;
  double gamma = 0.1;    // skill chain
  double epsilon = 0.1;  // tie rate
  int n = 5;             // items per HIT
  ModelInit init;
  // Fixed sigma of the Thurstone win probability. Not used by the online
  // updates.
  double thurstone_sigma = 1.0;

  // Throws std::invalid_argument on gamma <= 0, epsilon < 0, n < 2, or
  // initial values outside their domains.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Running sums for direct assessment.
struct MeanParams {
  double sum = 0.0;
  double sum_sq = 0.0;

  friend bool operator==(const MeanParams&, const MeanParams&) = default;
};

using LatentParams = std::variant<GaussianParams, BetaParams, MeanParams>;

struct InstanceState {
  std::string item_id;
  LatentParams params;
  std::int64_t observation_count = 0;

  friend bool operator==(const InstanceState&, const InstanceState&) = default;
};

InstanceState initial_state(std::string item_id, const ModelConfig& cfg);

enum class OutcomeKind { kWin, kTie };

// For kWin, winner_id beat loser_id. For kTie the pair is stored in
// lexicographic order (winner_id < loser_id) so processing does not depend on
// how the caller listed the items.
struct PairwiseOutcome {
  std::string winner_id;
  std::string loser_id;
  OutcomeKind kind = OutcomeKind::kWin;

  static PairwiseOutcome win(std::string winner, std::string loser);
  static PairwiseOutcome tie(std::string a, std::string b);

  friend bool operator==(const PairwiseOutcome&,
                         const PairwiseOutcome&) = default;
};

// A score in [0, 1] for one item.
struct ScalarJudgment {
  std::string item_id;
  double score = 0.0;
};

struct RaoKupperProbs {
  double win = 0.0;
  double tie = 0.0;
  double loss = 0.0;
};

// Thurstone: Phi((mu_i - mu_j) / (sqrt(2) sigma)).
double thurstone_win_prob(double mu_i, double mu_j, double sigma);

// TrueSkill surprisal factors. t is the (scaled) mean difference oriented
// from the first item of the observation, eps the (scaled) tie margin.
double ts_v_win(double t, double eps);
double ts_v_tie(double t, double eps);
double ts_w_win(double t, double eps);
double ts_w_tie(double t, double eps);

// Rao-Kupper win/tie/loss probabilities of item i against j from their modes.
RaoKupperProbs rao_kupper_probs(double mode_i, double mode_j, double eps);

// Both pairwise updates return the updated states in argument order. The
// outcome must name exactly the two argument items, in either order.
std::pair<InstanceState, InstanceState> ra_gaussian_update(
    const InstanceState& a, const InstanceState& b,
    const PairwiseOutcome& outcome, const ModelConfig& cfg);
std::pair<InstanceState, InstanceState> ra_beta_update(
    const InstanceState& a, const InstanceState& b,
    const PairwiseOutcome& outcome, const ModelConfig& cfg);

// alpha += s, beta += 1 - s.
InstanceState easl_update(const InstanceState& state,
                          const ScalarJudgment& judgment);

// Accumulates one direct-assessment judgment into the running mean.
InstanceState da_update(const InstanceState& state,
                        const ScalarJudgment& judgment);

double match_quality(const InstanceState& a, const InstanceState& b,
                     double gamma);

double da_aggregate(std::span<const ScalarJudgment> judgments);

// Pairwise outcomes implied by the scores of one partial-ranking HIT: items
// are ordered by descending score (stable in HIT order) and pairs are emitted
// by rank position, (0,1), (0,2), ..., (n-2,n-1). Score gaps <= tie_threshold
// are ties.
std::vector<PairwiseOutcome> derive_pairwise_outcomes(
    std::span<const ScalarJudgment> scores, double tie_threshold = 0.0);

// Mode for beta states, mu for Gaussian states, running mean for DA states
// (0.5 before the first judgment).
double current_score(const InstanceState& state);

// Beta variance, sigma^2, or the squared standard error of the DA mean
// (1/12 until two judgments exist).
double current_variance(const InstanceState& state);

// The set of item states for one campaign, updated in place.
class Model {
 public:
  explicit Model(ModelConfig cfg);
  Model(ModelConfig cfg, std::span<const std::string> item_ids);

  const ModelConfig& config() const { return cfg_; }

  // Adds an item at the configured initial state. Duplicate ids throw.
  void add_item(std::string item_id);
  bool contains(std::string_view item_id) const;

  // DA and EASL consume scalar judgments; the RA methods consume pairwise
  // outcomes. The other kind throws std::logic_error.
  void apply(const ScalarJudgment& judgment);
  void apply(const PairwiseOutcome& outcome);

  const InstanceState& state(std::string_view item_id) const;
  const std::vector<InstanceState>& states() const { return states_; }
  void set_state(InstanceState state);

  double score(std::string_view item_id) const;
  std::vector<double> scores() const;

  std::size_t size() const { return states_.size(); }

  friend bool operator==(const Model& a, const Model& b) {
    return a.cfg_ == b.cfg_ && a.states_ == b.states_;
  }

 private:
  std::size_t index_of(std::string_view item_id) const;

  ModelConfig cfg_;
  std::vector<InstanceState> states_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace easl

#endif  // EASL_MODELS_H_
