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

#include "easl/report_io.h"

#include <cstdio>
#include <ostream>
#include <string>

namespace easl {
namespace {

using nlohmann::json;

std::string_view noise_name(NoiseKind k) {
  return k == NoiseKind::kGaussianClamped ? "gaussian_clamped"
                                          : "beta_concentration";
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void csv_corr(std::ostream& out, const std::optional<CorrelationResult>& c) {
  if (c) {
    out << ',' << fmt(c->point) << ',' << fmt(c->ci_low) << ','
        << fmt(c->ci_high);
  } else {
    out << ",,,";
  }
}

}  // namespace

json correlation_to_json(const std::optional<CorrelationResult>& c) {
  if (!c) return nullptr;
  return {{"point", c->point},
          {"ci_low", c->ci_low},
          {"ci_high", c->ci_high},
          {"resamples", c->resamples},
          {"skipped", c->skipped}};
}

void write_report(std::ostream& out, const ExperimentReport& report,
                  const json& effective_config) {
  json header = {
      {"format_version", kFormatVersion},
      {"type", "experiment_report"},
      {"name", report.name},
      {"config", effective_config},
      {"oracle_kind", std::string(oracle_kind_name(report.oracle_kind))},
      {"annotator",
       {{"noise_kind", std::string(noise_name(report.annotator.noise_kind))},
        {"noise_scale", report.annotator.noise_scale},
        {"tie_threshold", report.annotator.tie_threshold},
        {"rng_seed", report.annotator.rng_seed}}},
      {"options",
       {{"iterations", report.options.iterations},
        {"hits_per_iteration",
         report.options.hits_per_iteration
             ? json(*report.options.hits_per_iteration)
             : json(nullptr)},
        {"anchors_as_comparators", report.options.anchors_as_comparators},
        {"bootstrap_resamples", report.options.bootstrap_resamples},
        {"ci_level", report.options.ci_level},
        {"seed", report.options.seed}}},
      {"oracle_histogram", report.oracle_histogram}};
  out << header.dump() << '\n';
  for (const auto& m : report.methods) {
    const std::string method(method_name(m.config.method));
    for (const auto& it : m.curve) {
      out << json{{"type", "iteration"},
                  {"method", method},
                  {"iteration", it.iteration},
                  {"judgments", it.judgments},
                  {"spearman", correlation_to_json(it.spearman)},
                  {"pearson", correlation_to_json(it.pearson)}}
                 .dump()
          << '\n';
    }
    out << json{{"type", "method_summary"},
                {"method", method},
                {"config", config_to_json(m.config)},
                {"total_judgments", m.total_judgments},
                {"histogram", m.histogram}}
               .dump()
        << '\n';
    for (const auto& s : m.final_scores) {
      out << json{{"type", "final_score"},
                  {"method", method},
                  {"item_id", s.item_id},
                  {"score", s.score},
                  {"variance", s.variance},
                  {"count", s.count},
                  {"oracle", s.oracle}}
                 .dump()
          << '\n';
    }
  }
}

void write_curves_csv(std::ostream& out,
                      std::span<const ExperimentReport> reports) {
  out << "experiment,method,iteration,judgments,spearman,spearman_low,"
         "spearman_high,pearson,pearson_low,pearson_high\n";
  for (const auto& r : reports) {
    for (const auto& m : r.methods) {
      for (const auto& it : m.curve) {
        out << csv_field(r.name) << ',' << method_name(m.config.method) << ','
            << it.iteration << ',' << it.judgments;
        csv_corr(out, it.spearman);
        csv_corr(out, it.pearson);
        out << '\n';
      }
    }
  }
}

}  // namespace easl
