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

// hivctl: simulate, analyse and optimise the delayed HIV/CTL model.

#include "hivdelay/config.hpp"
#include "hivdelay/runner.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Flags {
    std::string mode;
    std::string mode_opt;
    std::string preset;
    std::string config;
    std::string out = "out";
    std::optional<double> dt, tf, bigN, tau, tol, relax;
    std::optional<long long> max_iter;
    std::vector<double> ic;
    bool iterate = false;
    bool clamp_nonneg = false;
    bool strict_ranges = false;
    bool dump_config = false;
    std::vector<std::string> batch;
};

nlohmann::json overrides(const Flags& f)
{
    nlohmann::json j = nlohmann::json::object();
    if (!f.mode.empty()) {
        j["mode"] = f.mode;
    }
    if (!f.mode_opt.empty()) {
        j["mode"] = f.mode_opt;
    }
    auto put = [&j](const char* key, const std::optional<double>& v) {
        if (v) {
            j[key] = *v;
        }
    };
    put("dt", f.dt);
    put("tf", f.tf);
    put("bigN", f.bigN);
    put("tau", f.tau);
    put("tol", f.tol);
    put("relax", f.relax);
    if (f.max_iter) {
        j["max_iter"] = *f.max_iter;
    }
    if (!f.ic.empty()) {
        j["x0"] = f.ic[0];
        j["y0"] = f.ic[1];
        j["v0"] = f.ic[2];
        j["z0"] = f.ic[3];
    }
    if (f.iterate) {
        j["iterate"] = true;
    }
    if (f.clamp_nonneg) {
        j["clamp_nonneg"] = true;
    }
    if (f.strict_ranges) {
        j["strict_ranges"] = true;
    }
    return j;
}

int execute(const Flags& f)
{
    if (!f.batch.empty()) {
        std::vector<std::filesystem::path> paths(f.batch.begin(), f.batch.end());
        int worst = 0;
        for (const auto& r : hiv::run_batch(paths, f.out)) {
            std::cout << r.config.string() << ": " << (r.exit_code == 0 ? "ok" : "error") << ": " << r.message
                      << '\n';
            worst = std::max(worst, r.exit_code);
        }
        return worst;
    }

    hiv::ScenarioConfig cfg = f.preset.empty() ? hiv::ScenarioConfig{} : hiv::preset_config(f.preset);
    if (!f.config.empty()) {
        cfg = hiv::load_config_file(f.config, cfg);
    }
    hiv::apply_json(cfg, overrides(f));
    cfg.validate();

    if (f.dump_config) {
        std::cout << hiv::to_json(cfg).dump(2) << '\n';
        return 0;
    }
    const auto result = hiv::run(cfg, f.out);
    std::cout << hiv::to_string(cfg.mode) << ": " << result.summary << '\n';
    for (const auto& file : result.files) {
        std::cout << "  wrote " << file.string() << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Delayed HIV/CTL model: simulation, equilibria, stability and optimal treatment"};
    Flags f;
    app.add_option("MODE", f.mode, "simulate | equilibria | stability | optimize")
        ->check(CLI::IsMember({"simulate", "equilibria", "stability", "optimize"}));
    app.add_option("--mode", f.mode_opt, "same as the positional mode")
        ->check(CLI::IsMember({"simulate", "equilibria", "stability", "optimize"}));
    app.add_option("--preset", f.preset, "fig1-ic1 | fig1-ic2 | fig2 | fig3");
    app.add_option("--config", f.config, "flat JSON configuration file");
    app.add_option("--out", f.out, "output directory")->capture_default_str();
    app.add_option("--dt", f.dt, "Euler step (days)");
    app.add_option("--tf", f.tf, "final time (days)");
    app.add_option("--N", f.bigN, "virions per infected cell");
    app.add_option("--tau", f.tau, "intracellular delay (days)");
    app.add_option("--ic", f.ic, "constant history x,y,v,z")->delimiter(',')->expected(4);
    app.add_flag("--iterate", f.iterate, "use the iterated forward-backward sweep");
    app.add_option("--tol", f.tol, "control-change tolerance for --iterate");
    app.add_option("--max-iter", f.max_iter, "iteration cap for --iterate");
    app.add_option("--relax", f.relax, "relaxation factor in (0, 1] for --iterate");
    app.add_flag("--clamp-nonneg", f.clamp_nonneg, "clip negative states after each step");
    app.add_flag("--strict-ranges", f.strict_ranges, "reject parameters outside literature ranges");
    app.add_flag("--dump-config", f.dump_config, "print the resolved configuration as JSON and exit");
    app.add_option("--batch", f.batch, "run several config files concurrently");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        return execute(f);
    } catch (const hiv::Error& e) {
        std::cerr << "hivctl: " << e.what() << '\n';
        return hiv::exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "hivctl: " << e.what() << '\n';
        return 1;
    }
}
