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

#include "hivdelay/runner.hpp"

#include "hivdelay/dde.hpp"
#include "hivdelay/equilibria.hpp"

#include <fstream>
#include <future>
#include <sstream>

namespace hiv {

using nlohmann::json;

namespace {

json point_json(const State& s)
{
    return json::array({s.x, s.y, s.v, s.z});
}

json equilibrium_json(const Equilibrium& e)
{
    return {{"kind", std::string(to_string(e.kind))}, {"point", point_json(e.point)}, {"feasible", e.feasible}};
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot write " + path.string());
    }
    return out;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    auto out = open_out(path);
    out << text;
    if (!out) {
        throw Error(ErrorKind::IoError, "failed writing " + path.string());
    }
}

} // namespace

json equilibria_report(const ModelParams& k)
{
    json list = json::array({equilibrium_json(disease_free(k)), equilibrium_json(endemic_e1(k))});
    try {
        list.push_back(equilibrium_json(endemic_e2(k)));
    } catch (const Error& e) {
        list.push_back({{"kind", "FullEndemic"}, {"point", nullptr}, {"feasible", false}, {"error", e.what()}});
    }
    const auto cv = condition_values(k);
    return {
        {"equilibria", list},
        {"conditions", {{"cond_ef", cv.cond_ef}, {"cond_e2_exist", cv.cond_e2_exist}, {"cond_e1_e2", cv.cond_e1_e2}}},
    };
}

json to_json(const StabilityReport& r)
{
    json details = json::object();
    for (const auto& [name, value] : r.details) {
        details[name] = value;
    }
    json eig = json::array();
    for (const auto& e : r.eigenvalues) {
        eig.push_back(json::array({e.real(), e.imag()}));
    }
    json out = {
        {"equilibrium", equilibrium_json(r.equilibrium)},
        {"verdict_paper", std::string(to_string(r.verdict_paper))},
        {"verdict_rh_standard",
         r.verdict_rh_standard ? json(std::string(to_string(*r.verdict_rh_standard))) : json(nullptr)},
        {"verdict_numeric_tau0", std::string(to_string(r.verdict_numeric_tau0))},
        {"crossing_roots", r.crossing_roots},
        {"eigenvalues_tau0", eig},
        {"details", details},
        {"notes", r.notes},
    };
    if (r.crossing_poly) {
        out["crossing_poly"] = r.crossing_poly->coeffs();
    }
    return out;
}

json stability_report(const ModelParams& k)
{
    json list = json::array({to_json(classify_disease_free(k)), to_json(classify_e1(k))});
    try {
        json e2 = to_json(classify_e2_tau0(k));
        const auto scan = quasipoly_real_axis_scan(k, k.tau, 0.0, 10.0, 10000);
        e2["real_axis_scan"] = {
            {"lo", 0.0}, {"hi", 10.0}, {"samples", 10000}, {"tau", k.tau},
            {"f0", scan.samples.front().second},
            {"sign_changes", scan.sign_changes.size()},
            {"min_value", scan.min_value},
            {"notes", scan.notes},
        };
        list.push_back(e2);
    } catch (const Error& e) {
        list.push_back({{"equilibrium", {{"kind", "FullEndemic"}}}, {"error", e.what()}});
    }
    return {{"stability", list}};
}

std::string stability_text(const json& report)
{
    std::ostringstream out;
    for (const auto& entry : report.at("stability")) {
        out << "equilibrium: " << entry.at("equilibrium").at("kind").get<std::string>() << '\n';
        for (const auto& [key, value] : entry.items()) {
            if (key == "equilibrium") {
                continue;
            }
            if (value.is_string()) {
                out << "  " << key << ": " << value.get<std::string>() << '\n';
            } else if (key == "notes") {
                for (const auto& note : value) {
                    out << "  note: " << note.get<std::string>() << '\n';
                }
            } else if (value.is_object()) {
                for (const auto& [sub, v] : value.items()) {
                    out << "  " << key << '.' << sub << ": " << v.dump() << '\n';
                }
            } else {
                out << "  " << key << ": " << value.dump() << '\n';
            }
        }
    }
    return out.str();
}

json optimize_summary(const OptimalSolution& sol)
{
    const auto summary = summarize_controls(sol.trajectory);
    return {
        {"objective", sol.objective},
        {"iterations", sol.iterations},
        {"converged", sol.converged ? json(*sol.converged) : json(nullptr)},
        {"u1_switch_count", summary.u1_switch_count},
        {"u2_mean", summary.u2_mean},
        {"u2_fraction_above_0_8", summary.u2_fraction_above_08},
        {"final_state", point_json(sol.trajectory.final_state())},
        {"notes", sol.notes},
    };
}

RunOutput run(const ScenarioConfig& cfg, const std::filesystem::path& out_dir)
{
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw Error(ErrorKind::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
    }

    RunOutput result;
    switch (cfg.mode) {
    case Mode::Simulate: {
        const Grid grid = cfg.grid();
        const Trajectory traj = simulate(cfg.params, cfg.hist, grid, {}, {cfg.clamp_nonneg});
        const auto csv_path = out_dir / "trajectory.csv";
        {
            auto out = open_out(csv_path);
            write_csv(out, traj);
        }
        const auto pos = positivity_check(traj);
        json summary = {
            {"final_state", point_json(traj.final_state())},
            {"positivity_ok", pos.ok},
            {"first_negative_node", pos.first_bad_node ? json(*pos.first_bad_node) : json(nullptr)},
        };
        if (grid.n > grid.m) {
            const auto cert = boundedness_certificate(traj, cfg.params);
            summary["boundedness"] = {{"max_F", cert.max_F}, {"F0", cert.F0}, {"bound", cert.bound},
                                      {"violated", cert.violated}};
        }
        write_text(out_dir / "simulate.json", summary.dump(2) + "\n");
        result.files = {csv_path, out_dir / "simulate.json"};
        const State f = traj.final_state();
        result.summary = "final state x=" + format_double(f.x) + " y=" + format_double(f.y) +
                         " v=" + format_double(f.v) + " z=" + format_double(f.z);
        break;
    }
    case Mode::Equilibria: {
        write_text(out_dir / "equilibria.json", equilibria_report(cfg.params).dump(2) + "\n");
        result.files = {out_dir / "equilibria.json"};
        result.summary = "wrote equilibria.json";
        break;
    }
    case Mode::Stability: {
        const json report = stability_report(cfg.params);
        write_text(out_dir / "stability.json", report.dump(2) + "\n");
        write_text(out_dir / "stability.txt", stability_text(report));
        result.files = {out_dir / "stability.json", out_dir / "stability.txt"};
        result.summary = "wrote stability.json and stability.txt";
        break;
    }
    case Mode::Optimize: {
        const Grid grid = cfg.grid();
        const OptimalSolution sol = cfg.iterate ? sweep_iterated(cfg.params, cfg.hist, grid, *cfg.weights, cfg.sweep)
                                                : sweep_single_pass(cfg.params, cfg.hist, grid, *cfg.weights);
        const auto csv_path = out_dir / "solution.csv";
        {
            auto out = open_out(csv_path);
            write_csv(out, sol.trajectory);
        }
        write_text(out_dir / "optimize.json", optimize_summary(sol).dump(2) + "\n");
        result.files = {csv_path, out_dir / "optimize.json"};
        result.summary = "objective J=" + format_double(sol.objective);
        break;
    }
    }
    return result;
}

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::ValidationError:
    case ErrorKind::ParseError:
    case ErrorKind::NonCommensurateDelay:
    case ErrorKind::GridTooShort:
    case ErrorKind::InfeasibleEquilibrium:
    case ErrorKind::DegenerateDenominator:
        return 2;
    case ErrorKind::NonFiniteState:
        return 3;
    case ErrorKind::IoError:
        return 4;
    case ErrorKind::MissingControls:
        return 1;
    }
    return 1;
}

std::vector<BatchResult> run_batch(const std::vector<std::filesystem::path>& configs,
                                   const std::filesystem::path& out_dir)
{
    std::vector<std::future<BatchResult>> jobs;
    jobs.reserve(configs.size());
    for (const auto& path : configs) {
        jobs.push_back(std::async(std::launch::async, [path, out_dir] {
            BatchResult r{path, 0, {}};
            try {
                const ScenarioConfig cfg = load_config_file(path);
                r.message = run(cfg, out_dir / path.stem()).summary;
            } catch (const Error& e) {
                r.exit_code = exit_code_for(e.kind());
                r.message = e.what();
            } catch (const std::exception& e) {
                r.exit_code = 1;
                r.message = e.what();
            }
            return r;
        }));
    }
    std::vector<BatchResult> results;
    results.reserve(jobs.size());
    for (auto& job : jobs) {
        results.push_back(job.get());
    }
    return results;
}

} // namespace hiv
