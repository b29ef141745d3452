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

#include "easl/simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "easl/scheduler.h"

namespace easl {
namespace {

// Heavy-tailed "corpus counts": Pareto with this shape above kMinCount.
constexpr double kParetoShape = 0.7;
constexpr double kMinCount = 10.0;

std::string padded_name(const char* prefix, int i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, static_cast<std::size_t>(width) - digits.size(), '0');
  }
  return prefix + digits;
}

int id_width(int n) {
  int w = 3;
  for (int x = 1000; x <= n - 1; x *= 10) ++w;
  return w;
}

double draw_beta(std::mt19937_64& rng, double a, double b) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  const double x = ga(rng);
  const double y = gb(rng);
  return x / (x + y);
}

// Beta draw with the given mean and standard deviation; falls back to the
// mean when the spread is unattainable or zero.
double draw_beta_mean_sd(std::mt19937_64& rng, double mean, double sd) {
  if (sd <= 0.0 || mean <= 0.0 || mean >= 1.0) return mean;
  const double kappa = mean * (1.0 - mean) / (sd * sd) - 1.0;
  const double kMinKappa = 1e-3;
  const double k = std::max(kappa, kMinKappa);
  return draw_beta(rng, mean * k, (1.0 - mean) * k);
}

struct CorrelationPair {
  std::optional<CorrelationResult> spearman;
  std::optional<CorrelationResult> pearson;
};

CorrelationPair correlate(std::span<const double> scores,
                          std::span<const double> truth,
                          const CampaignOptions& options,
                          std::uint64_t stream) {
  CorrelationPair out;
  if (scores.size() < 2) return out;
  const std::uint64_t s = derive_seed(options.seed, stream);
  out.spearman = bootstrap_ci(scores, truth, spearman,
                              options.bootstrap_resamples, options.ci_level, s);
  out.pearson = bootstrap_ci(scores, truth, pearson,
                             options.bootstrap_resamples, options.ci_level,
                             derive_seed(s, 1));
  return out;
}

std::vector<std::int64_t> clamped_histogram(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return bin_histogram(v, 5);
}

MethodReport finish_report(const Model& model, std::span<const double> truth,
                           MethodReport report) {
  const auto scores = model.scores();
  for (std::size_t i = 0; i < model.size(); ++i) {
    const InstanceState& s = model.states()[i];
    report.final_scores.push_back({s.item_id, scores[i], current_variance(s),
                                   s.observation_count, truth[i]});
  }
  report.histogram = clamped_histogram(scores);
  return report;
}

void apply_observed(Model& model, const ScalarJudgment& j,
                    const UpdateObserver& observer) {
  if (!observer) {
    model.apply(j);
    return;
  }
  const InstanceState before = model.state(j.item_id);
  model.apply(j);
  observer(before, model.state(j.item_id));
}

void apply_observed(Model& model, const PairwiseOutcome& o,
                    const UpdateObserver& observer) {
  if (!observer) {
    model.apply(o);
    return;
  }
  const InstanceState a = model.state(o.winner_id);
  const InstanceState b = model.state(o.loser_id);
  model.apply(o);
  observer(a, model.state(o.winner_id));
  observer(b, model.state(o.loser_id));
}

// Feeds one elicited HIT into the model according to its method.
void apply_hit(Model& model, const PartialRanking& pr,
               const UpdateObserver& observer) {
  switch (model.config().method) {
    case Method::kEasl:
    case Method::kDa:
      for (const auto& s : pr.scalars) apply_observed(model, s, observer);
      break;
    case Method::kRaBeta:
    case Method::kRaGaussian:
      for (const auto& o : pr.pairwise) apply_observed(model, o, observer);
      break;
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::string_view oracle_kind_name(OracleKind kind) {
  switch (kind) {
    case OracleKind::kLogFrequencyLike:
      return "log_frequency_like";
    case OracleKind::kUniform:
      return "uniform";
    case OracleKind::kSkewed:
      return "skewed";
    case OracleKind::kBimodal:
      return "bimodal";
    case OracleKind::kCustomFile:
      return "custom_file";
  }
  return "unknown";
}

OracleKind parse_oracle_kind(std::string_view name) {
  for (OracleKind k :
       {OracleKind::kLogFrequencyLike, OracleKind::kUniform,
        OracleKind::kSkewed, OracleKind::kBimodal, OracleKind::kCustomFile}) {
    if (oracle_kind_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown oracle kind '" + std::string(name) +
                              "'");
}

Oracle::Oracle(OracleKind kind, std::vector<std::string> ids,
               std::vector<double> latent)
    : kind_(kind), ids_(std::move(ids)), latent_(std::move(latent)) {
  if (ids_.size() != latent_.size()) {
    throw std::invalid_argument("oracle: ids and latent values differ in size");
  }
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!(latent_[i] >= 0.0 && latent_[i] <= 1.0)) {
      throw std::invalid_argument("oracle: latent value outside [0, 1]");
    }
    if (!index_.emplace(ids_[i], i).second) {
      throw std::invalid_argument("oracle: duplicate item id '" + ids_[i] +
                                  "'");
    }
  }
}

double Oracle::latent_of(std::string_view item_id) const {
  auto it = index_.find(std::string(item_id));
  if (it == index_.end()) {
    throw std::out_of_range("oracle: unknown item '" + std::string(item_id) +
                            "'");
  }
  return latent_[it->second];
}

Oracle make_oracle(OracleKind kind, int num_items, std::uint64_t seed) {
  if (num_items < 2) throw std::invalid_argument("make_oracle: N < 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> latent(static_cast<std::size_t>(num_items));
  switch (kind) {
    case OracleKind::kLogFrequencyLike: {
      // log10 of a Pareto count, normalized by the largest log count.
      for (double& x : latent) {
        const double u = 1.0 - unit(rng);  // (0, 1]
        x = std::log10(kMinCount * std::pow(u, -1.0 / kParetoShape));
      }
      const double top = *std::max_element(latent.begin(), latent.end());
      for (double& x : latent) x /= top;
      break;
    }
    case OracleKind::kUniform:
      for (double& x : latent) x = unit(rng);
      break;
    case OracleKind::kSkewed:
      for (double& x : latent) x = draw_beta(rng, 5.0, 2.0);
      break;
    case OracleKind::kBimodal:
      for (double& x : latent) {
        x = unit(rng) < 0.5 ? draw_beta(rng, 2.0, 8.0) : draw_beta(rng, 8.0, 2.0);
      }
      break;
    case OracleKind::kCustomFile:
      throw std::invalid_argument(
          "make_oracle: custom_file oracles are loaded from an items file");
  }
  std::vector<std::string> ids;
  ids.reserve(latent.size());
  const int width = id_width(num_items);
  for (int i = 0; i < num_items; ++i) {
    ids.push_back(padded_name("item-", i, width));
  }
  return Oracle(kind, std::move(ids), std::move(latent));
}

Oracle oracle_from_items(std::span<const ItemRecord> items) {
  std::vector<std::string> ids;
  std::vector<double> latent;
  for (const auto& it : items) {
    if (!it.oracle_value) {
      throw std::invalid_argument("item '" + it.item_id +
                                  "' has no oracle_value");
    }
    ids.push_back(it.item_id);
    latent.push_back(*it.oracle_value);
  }
  if (ids.size() < 2) throw std::invalid_argument("oracle needs >= 2 items");
  return Oracle(OracleKind::kCustomFile, std::move(ids), std::move(latent));
}

Annotator::Annotator(const AnnotatorModel& model)
    : Annotator(model, model.rng_seed) {}

Annotator::Annotator(const AnnotatorModel& model, std::uint64_t stream)
    : model_(model), rng_(stream) {
  if (!(model.noise_scale >= 0.0) || !(model.tie_threshold >= 0.0)) {
    throw std::invalid_argument("annotator: negative noise or tie threshold");
  }
}

double Annotator::judge(double latent) {
  if (model_.noise_scale == 0.0) return latent;
  switch (model_.noise_kind) {
    case NoiseKind::kGaussianClamped: {
      std::normal_distribution<double> noise(0.0, model_.noise_scale);
      return std::clamp(latent + noise(rng_), 0.0, 1.0);
    }
    case NoiseKind::kBetaConcentration:
      return draw_beta_mean_sd(rng_, latent, model_.noise_scale);
  }
  return latent;
}

ScalarJudgment elicit_scalar(const Oracle& oracle, Annotator& annotator,
                             std::string_view item_id) {
  return {std::string(item_id), annotator.judge(oracle.latent_of(item_id))};
}

PartialRanking elicit_partial_ranking(const Oracle& oracle,
                                      Annotator& annotator,
                                      std::span<const std::string> item_ids) {
  PartialRanking pr;
  pr.scalars.reserve(item_ids.size());
  for (const auto& id : item_ids) {
    pr.scalars.push_back(elicit_scalar(oracle, annotator, id));
  }
  pr.pairwise =
      derive_pairwise_outcomes(pr.scalars, annotator.model().tie_threshold);
  return pr;
}

ExperimentReport run_campaign(const Oracle& oracle,
                              const AnnotatorModel& annotator_model,
                              const ModelConfig& cfg,
                              const CampaignOptions& options,
                              const UpdateObserver& observer) {
  cfg.validate();
  if (options.iterations < 0) {
    throw std::invalid_argument("run_campaign: negative iteration count");
  }
  ExperimentReport report;
  report.oracle_kind = oracle.kind();
  report.annotator = annotator_model;
  report.options = options;
  report.oracle_histogram = bin_histogram(oracle.latent(), 5);

  Model model(cfg, oracle.ids());
  Annotator annotator(annotator_model,
                      derive_seed(options.seed, annotator_model.rng_seed));
  MethodReport mr;
  mr.config = cfg;
  std::int64_t judgments = 0;

  for (int it = 0; it < options.iterations; ++it) {
    if (cfg.method == Method::kDa) {
      for (const auto& id : oracle.ids()) {
        apply_observed(model, elicit_scalar(oracle, annotator, id), observer);
        ++judgments;
      }
    } else {
      SchedulerOptions so;
      so.hits_per_iteration = options.hits_per_iteration;
      so.anchors_as_comparators = options.anchors_as_comparators;
      so.iteration = it;
      const auto hits = sample_hits(
          model.states(), cfg,
          derive_seed(options.seed, 0x5C4ED000ULL + static_cast<unsigned>(it)),
          so);
      for (const auto& hit : hits) {
        apply_hit(model, elicit_partial_ranking(oracle, annotator, hit.item_ids),
                  observer);
        judgments += static_cast<std::int64_t>(hit.item_ids.size());
      }
    }
    const auto scores = model.scores();
    const auto c = correlate(scores, oracle.latent(), options,
                             0xC0FFEE00ULL + static_cast<unsigned>(it));
    mr.curve.push_back({it + 1, judgments, c.spearman, c.pearson});
  }
  mr.total_judgments = judgments;
  report.methods.push_back(finish_report(model, oracle.latent(), std::move(mr)));
  return report;
}

SystemRankingTask make_system_ranking_task(int num_systems, int num_segments,
                                           double low, double high,
                                           double segment_noise,
                                           std::uint64_t seed) {
  if (num_systems < 2) throw std::invalid_argument("need >= 2 systems");
  if (num_segments < 1) throw std::invalid_argument("need >= 1 segment");
  if (!(low >= 0.0 && high <= 1.0 && low <= high)) {
    throw std::invalid_argument("system latent range must lie in [0, 1]");
  }
  SystemRankingTask task;
  std::mt19937_64 rng(seed);
  const int width = id_width(num_systems);
  for (int i = 0; i < num_systems; ++i) {
    task.system_ids.push_back(padded_name("system-", i, width));
    const double frac = static_cast<double>(i) / (num_systems - 1);
    task.system_latent.push_back(low + frac * (high - low));
  }
  // Shuffle the latent order so system ids carry no information.
  std::shuffle(task.system_latent.begin(), task.system_latent.end(), rng);
  task.segment_latent.resize(static_cast<std::size_t>(num_systems));
  for (int i = 0; i < num_systems; ++i) {
    auto& row = task.segment_latent[static_cast<std::size_t>(i)];
    row.reserve(static_cast<std::size_t>(num_segments));
    for (int m = 0; m < num_segments; ++m) {
      row.push_back(draw_beta_mean_sd(
          rng, task.system_latent[static_cast<std::size_t>(i)], segment_noise));
    }
  }
  return task;
}

ExperimentReport run_system_ranking(const SystemRankingTask& task,
                                    const AnnotatorModel& annotator_model,
                                    const ModelConfig& cfg,
                                    std::int64_t budget,
                                    const CampaignOptions& options) {
  cfg.validate();
  const auto m = static_cast<std::int64_t>(task.system_ids.size());
  if (m < 2) throw std::invalid_argument("run_system_ranking: need >= 2 systems");
  if (task.system_latent.size() != task.system_ids.size() ||
      task.segment_latent.size() != task.system_ids.size() ||
      task.num_segments() == 0) {
    throw std::invalid_argument("run_system_ranking: malformed task");
  }
  if (budget < 0 || (budget > 0 && budget < m)) {
    throw std::invalid_argument(
        "run_system_ranking: budget must be 0 or at least one judgment per "
        "system");
  }

  ExperimentReport report;
  report.oracle_kind = OracleKind::kCustomFile;
  report.annotator = annotator_model;
  report.options = options;
  report.oracle_histogram = bin_histogram(task.system_latent, 5);

  Model model(cfg, task.system_ids);
  Annotator annotator(annotator_model,
                      derive_seed(options.seed, annotator_model.rng_seed));
  std::mt19937_64 rng(derive_seed(options.seed, 0x5E6ULL));
  const std::size_t num_segments = task.num_segments();
  MethodReport mr;
  mr.config = cfg;
  std::int64_t judgments = 0;
  int checkpoint = 0;

  auto record = [&] {
    const auto c = correlate(model.scores(), task.system_latent, options,
                             0xC0FFEE00ULL + static_cast<unsigned>(checkpoint));
    mr.curve.push_back({checkpoint, judgments, c.spearman, c.pearson});
  };
  auto judge = [&](std::size_t system, std::size_t segment) {
    return ScalarJudgment{
        task.system_ids[system],
        annotator.judge(task.segment_latent[system][segment])};
  };

  if (budget == 0) record();

  if (cfg.method == Method::kDa) {
    // Each system walks its own random segment order, without replacement.
    std::vector<std::vector<std::size_t>> order(task.system_ids.size());
    std::vector<std::size_t> next(task.system_ids.size(), 0);
    for (auto& o : order) {
      o.resize(num_segments);
      std::iota(o.begin(), o.end(), 0);
      std::shuffle(o.begin(), o.end(), rng);
    }
    while (judgments < budget) {
      const auto sys = static_cast<std::size_t>(judgments % m);
      if (next[sys] == num_segments) {
        std::shuffle(order[sys].begin(), order[sys].end(), rng);
        next[sys] = 0;
      }
      model.apply(judge(sys, order[sys][next[sys]++]));
      ++judgments;
      if (judgments % m == 0) {
        ++checkpoint;
        record();
      }
    }
  } else {
    std::uniform_int_distribution<std::size_t> pick_segment(0,
                                                            num_segments - 1);
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < task.system_ids.size(); ++i) {
      index.emplace(task.system_ids[i], i);
    }
    bool exhausted = false;
    for (int it = 0; !exhausted; ++it) {
      SchedulerOptions so;
      so.hits_per_iteration = options.hits_per_iteration;
      so.anchors_as_comparators = options.anchors_as_comparators;
      so.iteration = it;
      const auto hits = sample_hits(
          model.states(), cfg,
          derive_seed(options.seed, 0x5C4ED000ULL + static_cast<unsigned>(it)),
          so);
      for (const auto& hit : hits) {
        const auto size = static_cast<std::int64_t>(hit.item_ids.size());
        if (judgments + size > budget) {
          exhausted = true;
          break;
        }
        // All outputs in a HIT translate the same source segment.
        const std::size_t segment = pick_segment(rng);
        PartialRanking pr;
        for (const auto& id : hit.item_ids) {
          pr.scalars.push_back(judge(index.at(id), segment));
        }
        pr.pairwise = derive_pairwise_outcomes(pr.scalars,
                                               annotator_model.tie_threshold);
        apply_hit(model, pr, {});
        judgments += size;
        while (judgments >= static_cast<std::int64_t>(checkpoint + 1) * m) {
          ++checkpoint;
          record();
        }
      }
      if (judgments == budget) exhausted = true;
    }
  }
  mr.total_judgments = judgments;
  report.methods.push_back(
      finish_report(model, task.system_latent, std::move(mr)));
  return report;
}

double da_agreement(const Oracle& oracle, const AnnotatorModel& annotator_model,
                    int annotators, std::uint64_t seed) {
  if (annotators < 2) throw std::invalid_argument("da_agreement: need >= 2");
  std::vector<std::vector<double>> rows;
  for (int a = 0; a < annotators; ++a) {
    Annotator annotator(annotator_model,
                        derive_seed(seed, static_cast<std::uint64_t>(a)));
    std::vector<double> row;
    row.reserve(oracle.size());
    for (double l : oracle.latent()) row.push_back(annotator.judge(l));
    rows.push_back(std::move(row));
  }
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      if (auto r = spearman(rows[i], rows[j])) {
        sum += *r;
        ++count;
      }
    }
  }
  return count > 0 ? sum / count : 0.0;
}

const ExperimentPreset& preset(std::string_view name) {
  static const std::vector<ExperimentPreset> kPresets = [] {
    std::vector<ExperimentPreset> p;
    const std::vector<Method> all = {Method::kDa, Method::kRaGaussian,
                                     Method::kRaBeta, Method::kEasl};

    ExperimentPreset lexical;
    lexical.name = "lexical-150";
    lexical.oracle = OracleKind::kLogFrequencyLike;
    lexical.annotator.noise_scale = 0.15;
    lexical.methods = all;
    p.push_back(lexical);

    ExperimentPreset political;
    political.name = "political-150";
    political.oracle = OracleKind::kSkewed;
    political.annotator.noise_scale = 0.105;
    political.methods = all;
    p.push_back(political);

    ExperimentPreset mt;
    mt.name = "mt-10-systems";
    mt.system_ranking = true;
    mt.num_items = 10;
    mt.hits_per_iteration = 2;
    mt.num_segments = 2999;
    mt.segment_noise = 0.2;
    mt.annotator.noise_scale = 0.0;
    mt.budget = 10 * 200;
    mt.methods = {Method::kDa, Method::kEasl};
    p.push_back(mt);
    return p;
  }();
  for (const auto& p : kPresets) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() {
  return {"lexical-150", "political-150", "mt-10-systems"};
}

}  // namespace easl
