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


#ifndef EASL_TOOLS_CLI_H_
#define EASL_TOOLS_CLI_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "easl/simulator.h"
#include "json.hpp"

namespace easl::cli {

// Everything a simulate run depends on, after preset, config file and flags
// have been merged in that order.
struct SimulationSettings {
  ExperimentPreset preset;
  ModelConfig model;
  std::uint64_t seed = 0;
  int bootstrap_resamples = 100;
  std::optional<std::filesystem::path> items_file;  // custom_file oracle
};

// Overrides present in a JSON config file. Unknown keys are rejected.
void apply_config_file(const nlohmann::json& j, SimulationSettings& s);

nlohmann::json settings_to_json(const SimulationSettings& s);

// All of the preset's methods against one oracle (or one system-ranking
// task), merged into a single report.
ExperimentReport run_simulation(const SimulationSettings& s);

// Per-iteration correlations of a replayed log against its items'
// oracle values.
struct ReplayCurvePoint {
  int iteration = 0;
  std::int64_t judgments = 0;
  std::optional<double> spearman;
  std::optional<double> pearson;
};
std::vector<ReplayCurvePoint> replay_curve(const ObservationLog& log);

// Entry point; args excludes the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace easl::cli

#endif  // EASL_TOOLS_CLI_H_
