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

#include "hivdelay/dde.hpp"

#include "hivdelay/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace hiv {

Grid Grid::make(double tf, double dt, double tau)
{
    if (!std::isfinite(dt) || dt <= 0) {
        throw Error::validation("dt", "must be a finite positive step");
    }
    if (!std::isfinite(tf) || tf <= 0) {
        throw Error::validation("tf", "must be a finite positive horizon");
    }
    if (!std::isfinite(tau) || tau < 0) {
        throw Error::validation("tau", "must be a finite nonnegative delay");
    }
    Grid g;
    g.tf = tf;
    g.dt = dt;
    g.n = static_cast<std::ptrdiff_t>(std::llround(tf / dt));
    g.m = static_cast<std::ptrdiff_t>(std::llround(tau / dt));
    if (std::abs(tau - static_cast<double>(g.m) * dt) > 1e-9 * std::max(1.0, tau)) {
        throw Error(ErrorKind::NonCommensurateDelay,
                    "tau = " + format_double(tau) + " is not an integer number of steps dt = " +
                        format_double(dt));
    }
    if (g.n < 1 || std::abs(tf - static_cast<double>(g.n) * dt) > 1e-9 * std::max(1.0, tf)) {
        throw Error::validation("tf", "must be a positive integer multiple of dt");
    }
    return g;
}

Trajectory simulate(const ModelParams& params, const HistoryFunction& hist, const Grid& grid,
                    std::span<const ControlPair> controls, SimulationOptions options)
{
    params.validate();
    hist.validate();
    if (std::abs(params.tau - grid.time(grid.m)) > 1e-9 * std::max(1.0, params.tau)) {
        throw Error::validation("tau", "does not match the delay steps of the grid");
    }
    const auto n = grid.n;
    const auto m = grid.m;
    if (!controls.empty()) {
        if (static_cast<std::ptrdiff_t>(controls.size()) != n + 1) {
            throw Error::validation("controls", "must hold one pair per grid node");
        }
        for (const auto& u : controls) {
            if (!u.in_bounds()) {
                throw Error::validation("controls", "must lie in [0,1]^2");
            }
        }
    }

    Trajectory traj;
    traj.grid = grid;
    traj.states.assign(static_cast<std::size_t>(n + m + 1), hist.state());
    if (!controls.empty()) {
        traj.controls.assign(controls.begin(), controls.end());
    }

    const double dt = grid.dt;
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i + m);
        const State& now = traj.states[k];
        const State& delayed = traj.states[k - static_cast<std::size_t>(m)];
        const Derivative f = controls.empty()
                                 ? rhs_uncontrolled(now, delayed, params)
                                 : rhs_controlled(now, delayed, controls[static_cast<std::size_t>(i)], params);
        State next{now.x + dt * f.dx, now.y + dt * f.dy, now.v + dt * f.dv, now.z + dt * f.dz};
        if (!next.is_finite()) {
            throw Error(ErrorKind::NonFiniteState,
                        "state became non-finite at t = " + format_double(grid.time(i + 1)) +
                            "; reduce dt");
        }
        if (options.clamp_nonneg) {
            next.x = std::max(next.x, 0.0);
            next.y = std::max(next.y, 0.0);
            next.v = std::max(next.v, 0.0);
            next.z = std::max(next.z, 0.0);
        }
        traj.states[k + 1] = next;
    }
    return traj;
}

BoundednessCertificate boundedness_certificate(const Trajectory& traj, const ModelParams& k)
{
    const auto n = traj.grid.n;
    const auto m = traj.grid.m;
    if (n <= m) {
        throw Error(ErrorKind::GridTooShort, "boundedness certificate needs tf > tau");
    }
    const double aN = k.a * k.bigN;
    auto F = [&](std::ptrdiff_t i) {
        const State& s = traj.state(i);
        const State& ahead = traj.state(i + m);
        return aN * s.x + aN * ahead.y + 0.5 * k.a * ahead.v;
    };

    BoundednessCertificate cert;
    cert.F0 = F(0);
    cert.max_F = cert.F0;
    for (std::ptrdiff_t i = 1; i <= n - m; ++i) {
        cert.max_F = std::max(cert.max_F, F(i));
    }
    const double rho = std::min({k.d, 0.5 * k.a, k.mu});
    cert.asymptotic_bound = k.lambda * aN / rho;
    cert.bound = std::max(cert.F0, cert.asymptotic_bound);
    cert.violated = cert.max_F > cert.bound * (1 + 1e-6);
    return cert;
}

PositivityResult positivity_check(const Trajectory& traj, double tolerance)
{
    for (std::size_t k = 0; k < traj.states.size(); ++k) {
        const State& s = traj.states[k];
        if (s.x < -tolerance || s.y < -tolerance || s.v < -tolerance || s.z < -tolerance) {
            return {false, static_cast<std::ptrdiff_t>(k) - traj.grid.m};
        }
    }
    return {};
}

std::string format_double(double value)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, end);
}

void write_csv(std::ostream& out, const Trajectory& traj)
{
    const bool with_u = traj.has_controls();
    const bool with_psi = traj.has_adjoints();
    out << "t,x,y,v,z";
    if (with_u) {
        out << ",u1,u2";
    }
    if (with_psi) {
        out << ",psi1,psi2,psi3,psi4";
    }
    out << '\n';
    for (std::ptrdiff_t i = 0; i <= traj.grid.n; ++i) {
        const State& s = traj.state(i);
        out << format_double(traj.grid.time(i)) << ',' << format_double(s.x) << ','
            << format_double(s.y) << ',' << format_double(s.v) << ',' << format_double(s.z);
        if (with_u) {
            const auto& u = traj.controls[static_cast<std::size_t>(i)];
            out << ',' << format_double(u.u1) << ',' << format_double(u.u2);
        }
        if (with_psi) {
            const auto& psi = traj.adjoints[static_cast<std::size_t>(i)];
            out << ',' << format_double(psi.psi1) << ',' << format_double(psi.psi2) << ','
                << format_double(psi.psi3) << ',' << format_double(psi.psi4);
        }
        out << '\n';
    }
}

} // namespace hiv
