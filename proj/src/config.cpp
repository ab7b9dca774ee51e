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

#include "hivdelay/config.hpp"

#include "hivdelay/errors.hpp"

#include <array>
#include <fstream>
#include <functional>
#include <map>

namespace hiv {

std::string_view to_string(Mode mode)
{
    switch (mode) {
    case Mode::Simulate:
        return "simulate";
    case Mode::Equilibria:
        return "equilibria";
    case Mode::Stability:
        return "stability";
    case Mode::Optimize:
        return "optimize";
    }
    return "unknown";
}

Mode parse_mode(std::string_view name)
{
    for (Mode m : {Mode::Simulate, Mode::Equilibria, Mode::Stability, Mode::Optimize}) {
        if (to_string(m) == name) {
            return m;
        }
    }
    throw Error::validation("mode", "must be one of simulate, equilibria, stability, optimize (got '" +
                                        std::string(name) + "')");
}

void ScenarioConfig::validate() const
{
    if (strict_ranges) {
        params.validate_ranges();
    } else {
        params.validate();
    }
    hist.validate();
    (void)grid();
    if (weights) {
        weights->validate();
    }
    if (mode == Mode::Optimize && !weights) {
        throw Error::validation("A1", "optimize mode needs weights A1 and A2");
    }
    if (!(sweep.tol > 0)) {
        throw Error::validation("tol", "must be positive");
    }
    if (sweep.max_iter < 1) {
        throw Error::validation("max_iter", "must be at least 1");
    }
    if (!(sweep.relax > 0 && sweep.relax <= 1)) {
        throw Error::validation("relax", "must lie in (0, 1]");
    }
}

ScenarioConfig preset_config(std::string_view name)
{
    ScenarioConfig cfg;
    constexpr HistoryFunction ic1{5, 1, 1, 2};
    constexpr HistoryFunction ic2{45, 2, 1, 4};
    if (name == "fig1-ic1" || name == "fig1-ic2") {
        cfg.params = reference_params(750);
        cfg.hist = name == "fig1-ic1" ? ic1 : ic2;
    } else if (name == "fig2" || name == "fig3") {
        cfg.params = reference_params(1500);
        cfg.hist = ic1;
        cfg.mode = name == "fig3" ? Mode::Optimize : Mode::Simulate;
    } else {
        throw Error::validation("preset", "must be one of fig1-ic1, fig1-ic2, fig2, fig3 (got '" +
                                              std::string(name) + "')");
    }
    cfg.tf = 500;
    cfg.dt = 0.01;
    cfg.weights = ObjectiveWeights{30, 40, cfg.tf};
    cfg.preset = std::string(name);
    return cfg;
}

namespace {

using nlohmann::json;

double as_number(const std::string& key, const json& value)
{
    if (!value.is_number()) {
        throw Error::validation(key, "must be a number");
    }
    return value.get<double>();
}

bool as_bool(const std::string& key, const json& value)
{
    if (!value.is_boolean()) {
        throw Error::validation(key, "must be true or false");
    }
    return value.get<bool>();
}

ObjectiveWeights& weights_of(ScenarioConfig& cfg)
{
    if (!cfg.weights) {
        cfg.weights = ObjectiveWeights{0, 0, cfg.tf};
    }
    return *cfg.weights;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const json&)>;

Setter number_field(double ModelParams::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const json& v) { c.params.*field = as_number(k, v); };
}

Setter hist_field(double HistoryFunction::*field)
{
    return [field](ScenarioConfig& c, const std::string& k, const json& v) { c.hist.*field = as_number(k, v); };
}

const std::map<std::string, Setter>& setters()
{
    static const std::map<std::string, Setter> table = {
        {"lambda", number_field(&ModelParams::lambda)},
        {"d", number_field(&ModelParams::d)},
        {"beta", number_field(&ModelParams::beta)},
        {"a", number_field(&ModelParams::a)},
        {"p", number_field(&ModelParams::p)},
        {"c", number_field(&ModelParams::c)},
        {"h_ctl", number_field(&ModelParams::h_ctl)},
        {"bigN", number_field(&ModelParams::bigN)},
        {"mu", number_field(&ModelParams::mu)},
        {"tau", number_field(&ModelParams::tau)},
        {"x0", hist_field(&HistoryFunction::x0)},
        {"y0", hist_field(&HistoryFunction::y0)},
        {"v0", hist_field(&HistoryFunction::v0)},
        {"z0", hist_field(&HistoryFunction::z0)},
        {"tf", [](ScenarioConfig& c, const std::string& k, const json& v) { c.tf = as_number(k, v); }},
        {"dt", [](ScenarioConfig& c, const std::string& k, const json& v) { c.dt = as_number(k, v); }},
        {"A1", [](ScenarioConfig& c, const std::string& k, const json& v) { weights_of(c).A1 = as_number(k, v); }},
        {"A2", [](ScenarioConfig& c, const std::string& k, const json& v) { weights_of(c).A2 = as_number(k, v); }},
        {"mode",
         [](ScenarioConfig& c, const std::string& k, const json& v) {
             if (!v.is_string()) {
                 throw Error::validation(k, "must be a string");
             }
             c.mode = parse_mode(v.get<std::string>());
         }},
        {"iterate", [](ScenarioConfig& c, const std::string& k, const json& v) { c.iterate = as_bool(k, v); }},
        {"tol", [](ScenarioConfig& c, const std::string& k, const json& v) { c.sweep.tol = as_number(k, v); }},
        {"max_iter",
         [](ScenarioConfig& c, const std::string& k, const json& v) {
             if (!v.is_number_integer() || v.get<long long>() < 1) {
                 throw Error::validation(k, "must be a positive integer");
             }
             c.sweep.max_iter = v.get<std::size_t>();
         }},
        {"relax", [](ScenarioConfig& c, const std::string& k, const json& v) { c.sweep.relax = as_number(k, v); }},
        {"clamp_nonneg",
         [](ScenarioConfig& c, const std::string& k, const json& v) { c.clamp_nonneg = as_bool(k, v); }},
        {"strict_ranges",
         [](ScenarioConfig& c, const std::string& k, const json& v) { c.strict_ranges = as_bool(k, v); }},
    };
    return table;
}

} // namespace

void apply_json(ScenarioConfig& cfg, const nlohmann::json& flat)
{
    if (!flat.is_object()) {
        throw Error(ErrorKind::ParseError, "configuration must be a JSON object");
    }
    const auto& table = setters();
    for (const auto& [key, value] : flat.items()) {
        const auto it = table.find(key);
        if (it == table.end()) {
            throw Error::validation(key, "is not a recognised configuration key");
        }
        it->second(cfg, key, value);
    }
    if (cfg.weights) {
        cfg.weights->tf = cfg.tf;
    }
}

ScenarioConfig load_config_file(const std::filesystem::path& path, ScenarioConfig base)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::IoError, "cannot open config file " + path.string());
    }
    nlohmann::json parsed;
    try {
        parsed = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    }
    apply_json(base, parsed);
    return base;
}

nlohmann::json to_json(const ScenarioConfig& cfg)
{
    const ModelParams& k = cfg.params;
    nlohmann::json out = {
        {"lambda", k.lambda}, {"d", k.d}, {"beta", k.beta}, {"a", k.a}, {"p", k.p},
        {"c", k.c}, {"h_ctl", k.h_ctl}, {"bigN", k.bigN}, {"mu", k.mu}, {"tau", k.tau},
        {"x0", cfg.hist.x0}, {"y0", cfg.hist.y0}, {"v0", cfg.hist.v0}, {"z0", cfg.hist.z0},
        {"tf", cfg.tf}, {"dt", cfg.dt},
        {"mode", std::string(to_string(cfg.mode))},
        {"iterate", cfg.iterate}, {"tol", cfg.sweep.tol}, {"max_iter", cfg.sweep.max_iter},
        {"relax", cfg.sweep.relax},
        {"clamp_nonneg", cfg.clamp_nonneg}, {"strict_ranges", cfg.strict_ranges},
    };
    if (cfg.weights) {
        out["A1"] = cfg.weights->A1;
        out["A2"] = cfg.weights->A2;
    }
    return out;
}

bool equivalent(const ScenarioConfig& lhs, const ScenarioConfig& rhs)
{
    // the preset name is provenance only; everything it sets is compared field by field
    return to_json(lhs) == to_json(rhs);
}

} // namespace hiv
