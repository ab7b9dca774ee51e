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

#include "hivdelay/dde.hpp"
#include "hivdelay/model.hpp"
#include "hivdelay/optctl.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace hiv {

enum class Mode { Simulate, Equilibria, Stability, Optimize };

std::string_view to_string(Mode mode);

/// Throws ValidationError naming `mode` for unknown names.
Mode parse_mode(std::string_view name);

struct ScenarioConfig {
    ModelParams params;
    HistoryFunction hist;
    double tf = 500;
    double dt = 0.01;
    std::optional<ObjectiveWeights> weights; ///< absent means no control problem
    Mode mode = Mode::Simulate;
    std::optional<std::string> preset;
    bool iterate = false;
    SweepOptions sweep;
    bool clamp_nonneg = false;
    bool strict_ranges = false;

    /// Full validation; errors name the offending key.
    void validate() const;
    Grid grid() const { return Grid::make(tf, dt, params.tau); }
};

/// fig1-ic1, fig1-ic2, fig2 or fig3; throws ValidationError naming `preset`.
ScenarioConfig preset_config(std::string_view name);

/// Overlays flat keys onto `cfg`. Unknown keys and wrongly typed values throw
/// ValidationError naming the key.
void apply_json(ScenarioConfig& cfg, const nlohmann::json& flat);

/// Reads a JSON file and overlays it onto `base`. Missing file: IoError;
/// malformed JSON: ParseError.
ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base = {});

/// Flat JSON that apply_json reads back into an equivalent config.
nlohmann::json to_json(const ScenarioConfig& cfg);

bool equivalent(const ScenarioConfig& lhs, const ScenarioConfig& rhs);

} // namespace hiv
