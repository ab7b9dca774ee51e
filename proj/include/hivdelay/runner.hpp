// Copyright 2026 The hivdelay Authors
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

#pragma once

#include "hivdelay/config.hpp"
#include "hivdelay/errors.hpp"
#include "hivdelay/optctl.hpp"
#include "hivdelay/stability.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hiv {

nlohmann::json equilibria_report(const ModelParams& params);

/// One entry per equilibrium; the full endemic entry carries `error` instead
/// of verdicts when that point does not exist.
nlohmann::json stability_report(const ModelParams& params);

nlohmann::json to_json(const StabilityReport& report);

/// key: value lines mirroring the JSON report.
std::string stability_text(const nlohmann::json& report);

nlohmann::json optimize_summary(const OptimalSolution& solution);

struct RunOutput {
    std::vector<std::filesystem::path> files;
    std::string summary; ///< short human-readable line
};

/**
 * Validates `cfg`, runs its mode and writes results under `out_dir`:
 *   simulate   -> trajectory.csv, simulate.json
 *   equilibria -> equilibria.json
 *   stability  -> stability.json, stability.txt
 *   optimize   -> solution.csv, optimize.json
 */
RunOutput run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir);

/// 2 invalid input, 3 numeric divergence, 4 I/O, 1 anything else.
int exit_code_for(ErrorKind kind);

struct BatchResult {
    std::filesystem::path config;
    int exit_code = 0;
    std::string message;
};

/// Runs every config concurrently, each into out_dir/<file stem>.
std::vector<BatchResult> run_batch(const std::vector<std::filesystem::path>& configs,
                                   const std::filesystem::path& out_dir);

} // namespace hiv
