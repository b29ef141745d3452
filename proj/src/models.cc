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

#include "easl/models.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace easl {
namespace {

// Beyond this mean difference the tie factors switch to the Mills-ratio form.
constexpr double kTieTail = 5.0;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

void require_tie_margin(double eps, const char* what) {
  require_finite(eps, what);
  if (!(eps > 0.0)) {
    throw std::invalid_argument(std::string(what) +
                                ": tie margin must be positive");
  }
}

const GaussianParams& gaussian_of(const InstanceState& s) {
  const auto* p = std::get_if<GaussianParams>(&s.params);
  if (p == nullptr) {
    throw std::invalid_argument("item '" + s.item_id +
                                "' is not Gaussian-parameterized");
  }
  return *p;
}

const BetaParams& beta_of(const InstanceState& s) {
  const auto* p = std::get_if<BetaParams>(&s.params);
  if (p == nullptr) {
    throw std::invalid_argument("item '" + s.item_id +
                                "' is not beta-parameterized");
  }
  return *p;
}

// Whether the first argument plays the winner (or first tie) role.
bool first_is_winner(const InstanceState& a, const InstanceState& b,
                     const PairwiseOutcome& o) {
  if (o.winner_id == o.loser_id) {
    throw std::invalid_argument("pairwise outcome compares an item to itself");
  }
  if (a.item_id == o.winner_id && b.item_id == o.loser_id) return true;
  if (b.item_id == o.winner_id && a.item_id == o.loser_id) return false;
  throw std::invalid_argument("outcome (" + o.winner_id + ", " + o.loser_id +
                              ") does not match states (" + a.item_id + ", " +
                              b.item_id + ")");
}

// Tie factors for t >= 0. Writes v and the non-v^2 part of w.
void tie_factors(double t, double eps, double* v, double* w_rest) {
  const double a = eps - t;
  const double b = -eps - t;
  if (t <= eps + kTieTail) {
    const double den = std_normal_cdf(a) - std_normal_cdf(b);
    const double pa = std_normal_pdf(a);
    const double pb = std_normal_pdf(b);
    *v = (pb - pa) / den;
    *w_rest = (a * pa - b * pb) / den;
    return;
  }
  // Divide through by phi(a); phi(b)/phi(a) = exp(-2 eps t).
  const double r = std::exp(-2.0 * eps * t);
  const double den = mills_ratio(-a) - r * mills_ratio(-b);
  *v = (r - 1.0) / den;
  *w_rest = (a - b * r) / den;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kDa:
      return "da";
    case Method::kRaGaussian:
      return "ra-gaussian";
    case Method::kRaBeta:
      return "ra-beta";
    case Method::kEasl:
      return "easl";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "da") return Method::kDa;
  if (name == "ra-gaussian") return Method::kRaGaussian;
  if (name == "ra-beta") return Method::kRaBeta;
  if (name == "easl") return Method::kEasl;
  throw std::invalid_argument("unknown method '" + std::string(name) + "'");
}

void ModelConfig::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("gamma must be positive");
  }
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("epsilon must be non-negative");
  }
  if (n < 2 && method != Method::kDa) {
    throw std::invalid_argument("n must be at least 2");
  }
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  if (!(init.alpha >= 1.0) || !(init.beta >= 1.0)) {
    throw std::invalid_argument("initial alpha and beta must be >= 1");
  }
  if (!(init.sigma2 > 0.0) || !std::isfinite(init.mu)) {
    throw std::invalid_argument("initial sigma2 must be positive");
  }
  if (!(thurstone_sigma > 0.0)) {
    throw std::invalid_argument("thurstone_sigma must be positive");
  }
}

InstanceState initial_state(std::string item_id, const ModelConfig& cfg) {
  InstanceState s;
  s.item_id = std::move(item_id);
  switch (cfg.method) {
    case Method::kDa:
      s.params = MeanParams{};
      break;
    case Method::kRaGaussian:
      s.params = GaussianParams{cfg.init.mu, cfg.init.sigma2};
      break;
    case Method::kRaBeta:
    case Method::kEasl:
      s.params = BetaParams{cfg.init.alpha, cfg.init.beta};
      break;
  }
  return s;
}

PairwiseOutcome PairwiseOutcome::win(std::string winner, std::string loser) {
  if (winner == loser) {
    throw std::invalid_argument("pairwise outcome compares an item to itself");
  }
  return {std::move(winner), std::move(loser), OutcomeKind::kWin};
}

PairwiseOutcome PairwiseOutcome::tie(std::string a, std::string b) {
  if (a == b) {
    throw std::invalid_argument("pairwise outcome compares an item to itself");
  }
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b), OutcomeKind::kTie};
}

double thurstone_win_prob(double mu_i, double mu_j, double sigma) {
  require_finite(mu_i, "thurstone_win_prob");
  require_finite(mu_j, "thurstone_win_prob");
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("thurstone_win_prob: sigma must be positive");
  }
  return std_normal_cdf((mu_i - mu_j) / (std::sqrt(2.0) * sigma));
}

double ts_v_win(double t, double eps) {
  require_finite(t, "ts_v_win");
  require_finite(eps, "ts_v_win");
  return normal_pdf_cdf_ratio(t - eps);
}

double ts_w_win(double t, double eps) {
  const double v = ts_v_win(t, eps);
  return v * (v + t - eps);
}

double ts_v_tie(double t, double eps) {
  require_finite(t, "ts_v_tie");
  require_tie_margin(eps, "ts_v_tie");
  double v = 0.0;
  double rest = 0.0;
  tie_factors(std::fabs(t), eps, &v, &rest);
  return t < 0.0 ? -v : v;
}

double ts_w_tie(double t, double eps) {
  require_finite(t, "ts_w_tie");
  require_tie_margin(eps, "ts_w_tie");
  double v = 0.0;
  double rest = 0.0;
  tie_factors(std::fabs(t), eps, &v, &rest);
  return v * v + rest;
}

RaoKupperProbs rao_kupper_probs(double mode_i, double mode_j, double eps) {
  if (!(mode_i >= 0.0 && mode_i <= 1.0) || !(mode_j >= 0.0 && mode_j <= 1.0)) {
    throw std::invalid_argument("rao_kupper_probs: modes must lie in [0, 1]");
  }
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("rao_kupper_probs: eps must be >= 0");
  }
  const double theta = std::exp(eps);
  const double pi_i = std::exp(mode_i);
  const double pi_j = std::exp(mode_j);
  const double d_i = pi_i + theta * pi_j;
  const double d_j = theta * pi_i + pi_j;
  RaoKupperProbs p;
  p.win = pi_i / d_i;
  p.loss = pi_j / d_j;
  p.tie = (theta * theta - 1.0) * (pi_i * pi_j) / (d_i * d_j);
  return p;
}

std::pair<InstanceState, InstanceState> ra_gaussian_update(
    const InstanceState& a, const InstanceState& b,
    const PairwiseOutcome& outcome, const ModelConfig& cfg) {
  const bool a_first = first_is_winner(a, b, outcome);
  InstanceState first = a_first ? a : b;
  InstanceState second = a_first ? b : a;
  GaussianParams gi = gaussian_of(first);
  GaussianParams gj = gaussian_of(second);

  const double c2 = 2.0 * cfg.gamma * cfg.gamma + (gi.sigma2 + gj.sigma2);
  const double c = std::sqrt(c2);
  const double t = (gi.mu - gj.mu) / c;
  const double eps = cfg.epsilon / c;
  double v = 0.0;
  double w = 0.0;
  if (outcome.kind == OutcomeKind::kWin) {
    v = ts_v_win(t, eps);
    w = ts_w_win(t, eps);
  } else {
    v = ts_v_tie(t, eps);
    w = ts_w_tie(t, eps);
  }
  gi.mu += gi.sigma2 / c * v;
  gj.mu -= gj.sigma2 / c * v;
  gi.sigma2 *= 1.0 - gi.sigma2 / c2 * w;
  gj.sigma2 *= 1.0 - gj.sigma2 / c2 * w;

  first.params = gi;
  second.params = gj;
  ++first.observation_count;
  ++second.observation_count;
  if (a_first) return {std::move(first), std::move(second)};
  return {std::move(second), std::move(first)};
}

std::pair<InstanceState, InstanceState> ra_beta_update(
    const InstanceState& a, const InstanceState& b,
    const PairwiseOutcome& outcome, const ModelConfig& cfg) {
  const bool a_first = first_is_winner(a, b, outcome);
  InstanceState first = a_first ? a : b;
  InstanceState second = a_first ? b : a;
  BetaParams bi = beta_of(first);
  BetaParams bj = beta_of(second);

  const double mode_i = beta_mode(bi);
  const double mode_j = beta_mode(bj);
  const double var_i = beta_variance(bi);
  const double var_j = beta_variance(bj);
  const double c = std::sqrt(2.0 * cfg.gamma * cfg.gamma + (var_i + var_j));
  const double eps = cfg.epsilon;

  if (outcome.kind == OutcomeKind::kWin) {
    const double p_win = rao_kupper_probs(mode_i, mode_j, eps).win;
    const double p_lose = rao_kupper_probs(mode_j, mode_i, eps).loss;
    bi.alpha += var_i / c * (1.0 - p_win);
    bj.beta += var_j / c * (1.0 - p_lose);
  } else {
    const double surprise = 1.0 - rao_kupper_probs(mode_i, mode_j, eps).tie;
    const double d = mode_i - mode_j;
    if (std::fabs(d) > eps) {
      // Pull the higher item down and the lower one up.
      BetaParams& hi = d > 0.0 ? bi : bj;
      BetaParams& lo = d > 0.0 ? bj : bi;
      const double var_hi = d > 0.0 ? var_i : var_j;
      const double var_lo = d > 0.0 ? var_j : var_i;
      lo.alpha += var_lo / c * surprise;
      hi.beta += var_hi / c * surprise;
    } else {
      bi.alpha += var_i / c * surprise;
      bi.beta += var_i / c * surprise;
      bj.alpha += var_j / c * surprise;
      bj.beta += var_j / c * surprise;
    }
  }

  first.params = bi;
  second.params = bj;
  ++first.observation_count;
  ++second.observation_count;
  if (a_first) return {std::move(first), std::move(second)};
  return {std::move(second), std::move(first)};
}

InstanceState easl_update(const InstanceState& state,
                          const ScalarJudgment& judgment) {
  if (judgment.item_id != state.item_id) {
    throw std::invalid_argument("judgment for '" + judgment.item_id +
                                "' applied to '" + state.item_id + "'");
  }
  if (!(judgment.score >= 0.0 && judgment.score <= 1.0)) {
    throw std::invalid_argument("scalar score must lie in [0, 1]");
  }
  BetaParams p = beta_of(state);
  p.alpha += judgment.score;
  p.beta += 1.0 - judgment.score;
  InstanceState out = state;
  out.params = p;
  ++out.observation_count;
  return out;
}

InstanceState da_update(const InstanceState& state,
                        const ScalarJudgment& judgment) {
  if (judgment.item_id != state.item_id) {
    throw std::invalid_argument("judgment for '" + judgment.item_id +
                                "' applied to '" + state.item_id + "'");
  }
  if (!(judgment.score >= 0.0 && judgment.score <= 1.0)) {
    throw std::invalid_argument("scalar score must lie in [0, 1]");
  }
  const auto* p = std::get_if<MeanParams>(&state.params);
  if (p == nullptr) {
    throw std::invalid_argument("item '" + state.item_id +
                                "' is not a direct-assessment state");
  }
  MeanParams m = *p;
  m.sum += judgment.score;
  m.sum_sq += judgment.score * judgment.score;
  InstanceState out = state;
  out.params = m;
  ++out.observation_count;
  return out;
}

double match_quality(const InstanceState& a, const InstanceState& b,
                     double gamma) {
  double loc_a = 0.0;
  double loc_b = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  if (std::holds_alternative<GaussianParams>(a.params)) {
    const GaussianParams& ga = gaussian_of(a);
    const GaussianParams& gb = gaussian_of(b);
    loc_a = ga.mu;
    loc_b = gb.mu;
    var_a = ga.sigma2;
    var_b = gb.sigma2;
  } else {
    const BetaParams& ba = beta_of(a);
    const BetaParams& bb = beta_of(b);
    loc_a = beta_mode(ba);
    loc_b = beta_mode(bb);
    var_a = beta_variance(ba);
    var_b = beta_variance(bb);
  }
  const double two_g2 = 2.0 * gamma * gamma;
  const double c2 = two_g2 + (var_a + var_b);
  const double d = loc_a - loc_b;
  return std::sqrt(two_g2 / c2) * std::exp(-d * d / (2.0 * c2));
}

double da_aggregate(std::span<const ScalarJudgment> judgments) {
  if (judgments.empty()) {
    throw std::invalid_argument("da_aggregate: no judgments");
  }
  double sum = 0.0;
  for (const auto& j : judgments) {
    if (!(j.score >= 0.0 && j.score <= 1.0)) {
      throw std::invalid_argument("scalar score must lie in [0, 1]");
    }
    sum += j.score;
  }
  return sum / static_cast<double>(judgments.size());
}

std::vector<PairwiseOutcome> derive_pairwise_outcomes(
    std::span<const ScalarJudgment> scores, double tie_threshold) {
  for (std::size_t i = 0; i < scores.size(); ++i) {
    for (std::size_t j = i + 1; j < scores.size(); ++j) {
      if (scores[i].item_id == scores[j].item_id) {
        throw std::invalid_argument("duplicate item '" + scores[i].item_id +
                                    "' in partial ranking");
      }
    }
  }
  if (scores.size() < 2) return {};
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return scores[a].score > scores[b].score;
                   });
  std::vector<PairwiseOutcome> out;
  out.reserve(scores.size() * (scores.size() - 1) / 2);
  for (std::size_t r = 0; r < order.size(); ++r) {
    for (std::size_t q = r + 1; q < order.size(); ++q) {
      const ScalarJudgment& hi = scores[order[r]];
      const ScalarJudgment& lo = scores[order[q]];
      if (std::fabs(hi.score - lo.score) <= tie_threshold) {
        out.push_back(PairwiseOutcome::tie(hi.item_id, lo.item_id));
      } else {
        out.push_back(PairwiseOutcome::win(hi.item_id, lo.item_id));
      }
    }
  }
  return out;
}

double current_score(const InstanceState& state) {
  if (const auto* g = std::get_if<GaussianParams>(&state.params)) return g->mu;
  if (const auto* b = std::get_if<BetaParams>(&state.params)) {
    return beta_mode(*b);
  }
  const auto& m = std::get<MeanParams>(state.params);
  if (state.observation_count == 0) return 0.5;
  return m.sum / static_cast<double>(state.observation_count);
}

double current_variance(const InstanceState& state) {
  if (const auto* g = std::get_if<GaussianParams>(&state.params)) {
    return g->sigma2;
  }
  if (const auto* b = std::get_if<BetaParams>(&state.params)) {
    return beta_variance(*b);
  }
  const auto& m = std::get<MeanParams>(state.params);
  const auto k = static_cast<double>(state.observation_count);
  if (state.observation_count < 2) return 1.0 / 12.0;
  const double mean = m.sum / k;
  const double s2 = std::max(0.0, (m.sum_sq - k * mean * mean) / (k - 1.0));
  return s2 / k;
}

Model::Model(ModelConfig cfg) : cfg_(cfg) { cfg_.validate(); }

Model::Model(ModelConfig cfg, std::span<const std::string> item_ids)
    : Model(cfg) {
  for (const auto& id : item_ids) add_item(id);
}

void Model::add_item(std::string item_id) {
  if (index_.contains(item_id)) {
    throw std::invalid_argument("duplicate item id '" + item_id + "'");
  }
  index_.emplace(item_id, states_.size());
  states_.push_back(initial_state(std::move(item_id), cfg_));
}

bool Model::contains(std::string_view item_id) const {
  return index_.contains(std::string(item_id));
}

std::size_t Model::index_of(std::string_view item_id) const {
  auto it = index_.find(std::string(item_id));
  if (it == index_.end()) {
    throw std::out_of_range("unknown item '" + std::string(item_id) + "'");
  }
  return it->second;
}

void Model::apply(const ScalarJudgment& judgment) {
  InstanceState& s = states_[index_of(judgment.item_id)];
  switch (cfg_.method) {
    case Method::kDa:
      s = da_update(s, judgment);
      return;
    case Method::kEasl:
      s = easl_update(s, judgment);
      return;
    default:
      throw std::logic_error("scalar judgments are not used by " +
                             std::string(method_name(cfg_.method)));
  }
}

void Model::apply(const PairwiseOutcome& outcome) {
  InstanceState& a = states_[index_of(outcome.winner_id)];
  InstanceState& b = states_[index_of(outcome.loser_id)];
  switch (cfg_.method) {
    case Method::kRaGaussian: {
      auto [na, nb] = ra_gaussian_update(a, b, outcome, cfg_);
      a = std::move(na);
      b = std::move(nb);
      return;
    }
    case Method::kRaBeta: {
      auto [na, nb] = ra_beta_update(a, b, outcome, cfg_);
      a = std::move(na);
      b = std::move(nb);
      return;
    }
    default:
      throw std::logic_error("pairwise outcomes are not used by " +
                             std::string(method_name(cfg_.method)));
  }
}

const InstanceState& Model::state(std::string_view item_id) const {
  return states_[index_of(item_id)];
}

void Model::set_state(InstanceState state) {
  const std::size_t i = index_of(state.item_id);
  if (state.params.index() != states_[i].params.index()) {
    throw std::invalid_argument("state parameterization does not match model");
  }
  states_[i] = std::move(state);
}

double Model::score(std::string_view item_id) const {
  return current_score(state(item_id));
}

std::vector<double> Model::scores() const {
  std::vector<double> out;
  out.reserve(states_.size());
  for (const auto& s : states_) out.push_back(current_score(s));
  return out;
}

}  // namespace easl
