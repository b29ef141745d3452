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

#ifndef EASL_SIMULATOR_H_
#define EASL_SIMULATOR_H_

// Synthetic ground truth and simulated annotators, and the campaign loops
// that run DA, RA and EASL against them.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "easl/metrics.h"
#include "easl/models.h"
#include "easl/persistence.h"

namespace easl {

enum class OracleKind {
  kLogFrequencyLike,
  kUniform,
  kSkewed,
  kBimodal,
  kCustomFile
};

std::string_view oracle_kind_name(OracleKind kind);
OracleKind parse_oracle_kind(std::string_view name);

// Ground-truth latent value in [0, 1] per item, in a fixed item order.
class Oracle {
 public:
  Oracle(OracleKind kind, std::vector<std::string> ids,
         std::vector<double> latent);

  OracleKind kind() const { return kind_; }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<double>& latent() const { return latent_; }
  double latent_of(std::string_view item_id) const;
  std::size_t size() const { return ids_.size(); }

 private:
  OracleKind kind_;
  std::vector<std::string> ids_;
  std::vector<double> latent_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Item ids are "item-000", "item-001", ... so lexicographic order matches
// generation order. kCustomFile is not generated; use oracle_from_items.
Oracle make_oracle(OracleKind kind, int num_items, std::uint64_t seed);

// Every item must carry an oracle_value.
Oracle oracle_from_items(std::span<const ItemRecord> items);

enum class NoiseKind { kGaussianClamped, kBetaConcentration };

struct AnnotatorModel {
  NoiseKind noise_kind = NoiseKind::kGaussianClamped;
  // Standard deviation of one judgment around the latent value.
  double noise_scale = 0.15;
  // Score gaps at or below this are reported as ties in partial rankings.
  double tie_threshold = 0.01;
  std::uint64_t rng_seed = 0;
};

// A stateful simulated annotator drawing from an AnnotatorModel.
class Annotator {
 public:
  explicit Annotator(const AnnotatorModel& model);
  Annotator(const AnnotatorModel& model, std::uint64_t stream);

  const AnnotatorModel& model() const { return model_; }
  // A noisy reading of latent, always in [0, 1].
  double judge(double latent);

 private:
  AnnotatorModel model_;
  std::mt19937_64 rng_;
};

ScalarJudgment elicit_scalar(const Oracle& oracle, Annotator& annotator,
                             std::string_view item_id);

struct PartialRanking {
  std::vector<ScalarJudgment> scalars;
  std::vector<PairwiseOutcome> pairwise;
};

PartialRanking elicit_partial_ranking(const Oracle& oracle,
                                      Annotator& annotator,
                                      std::span<const std::string> item_ids);

struct IterationStats {
  int iteration = 0;  // 1-based: stats after this many iterations
  std::int64_t judgments = 0;
  std::optional<CorrelationResult> spearman;
  std::optional<CorrelationResult> pearson;
};

struct FinalScore {
  std::string item_id;
  double score = 0.0;
  double variance = 0.0;
  std::int64_t count = 0;
  double oracle = 0.0;
};

struct MethodReport {
  ModelConfig config;
  std::vector<IterationStats> curve;
  std::vector<FinalScore> final_scores;  // oracle item order
  std::vector<std::int64_t> histogram;   // 5 bins, scores clamped to [0, 1]
  std::int64_t total_judgments = 0;
};

struct CampaignOptions {
  int iterations = 10;
  // RA/EASL only; defaults to floor(N / n).
  std::optional<int> hits_per_iteration;
  bool anchors_as_comparators = false;
  int bootstrap_resamples = 100;
  double ci_level = 0.95;
  std::uint64_t seed = 0;
};

struct ExperimentReport {
  std::string name;
  OracleKind oracle_kind = OracleKind::kUniform;
  AnnotatorModel annotator;
  CampaignOptions options;
  std::vector<std::int64_t> oracle_histogram;
  std::vector<MethodReport> methods;
};

// Called with the before/after state of every item an update touches.
using UpdateObserver =
    std::function<void(const InstanceState& before, const InstanceState& after)>;

// DA: each iteration is one pass in which every item receives one judgment.
// RA/EASL: each iteration samples HITs from the current state, elicits a
// partial ranking for each, then applies the updates HIT by HIT.
ExperimentReport run_campaign(const Oracle& oracle,
                              const AnnotatorModel& annotator,
                              const ModelConfig& cfg,
                              const CampaignOptions& options,
                              const UpdateObserver& observer = {});

// Per-segment quality of each system's output, q[system][segment] in [0, 1].
struct SystemRankingTask {
  std::vector<std::string> system_ids;
  std::vector<double> system_latent;
  std::vector<std::vector<double>> segment_latent;

  std::size_t num_segments() const {
    return segment_latent.empty() ? 0 : segment_latent.front().size();
  }
};

// System means evenly spaced in [low, high]; each segment quality is drawn
// from a beta with that mean and standard deviation segment_noise.
SystemRankingTask make_system_ranking_task(int num_systems, int num_segments,
                                           double low, double high,
                                           double segment_noise,
                                           std::uint64_t seed);

// Scores one system output per judgment and ranks systems by current_score.
// Correlations are recorded every num_systems judgments (one annotation per
// system); curve[k].judgments / num_systems gives annotations per system.
// budget == 0 yields a single degenerate point; 0 < budget < num_systems
// throws.
ExperimentReport run_system_ranking(const SystemRankingTask& task,
                                    const AnnotatorModel& annotator,
                                    const ModelConfig& cfg,
                                    std::int64_t budget,
                                    const CampaignOptions& options);

// Mean pairwise Spearman between the score vectors of independent
// annotators who each judge every item once.
double da_agreement(const Oracle& oracle, const AnnotatorModel& annotator,
                    int annotators, std::uint64_t seed);

// Deterministic sub-seed derivation (SplitMix64 over seed and stream).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

struct ExperimentPreset {
  std::string name;
  bool system_ranking = false;
  OracleKind oracle = OracleKind::kUniform;
  int num_items = 150;
  int n = 5;
  int hits_per_iteration = 20;
  int iterations = 10;
  AnnotatorModel annotator;
  // System ranking only.
  int num_segments = 0;
  double segment_noise = 0.0;
  double system_low = 0.3;
  double system_high = 0.75;
  std::int64_t budget = 0;
  std::vector<Method> methods;
};

// "lexical-150", "political-150", "mt-10-systems".
const ExperimentPreset& preset(std::string_view name);
std::vector<std::string> preset_names();

}  // namespace easl

#endif  // EASL_SIMULATOR_H_
