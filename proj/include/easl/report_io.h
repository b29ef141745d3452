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

#ifndef EASL_REPORT_IO_H_
#define EASL_REPORT_IO_H_

#include <iosfwd>
#include <span>

#include "easl/simulator.h"
#include "json.hpp"

namespace easl {

// Line-delimited report: an "experiment_report" header echoing the effective
// configuration, then "iteration", "method_summary" and "final_score" lines.
void write_report(std::ostream& out, const ExperimentReport& report,
                  const nlohmann::json& effective_config);

// Plot-ready correlation curves, one row per (experiment, method, iteration).
// Undefined correlations are written as empty fields.
void write_curves_csv(std::ostream& out,
                      std::span<const ExperimentReport> reports);

nlohmann::json correlation_to_json(const std::optional<CorrelationResult>& c);

}  // namespace easl

#endif  // EASL_REPORT_IO_H_
