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

#include "hivdelay/model.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hiv {

/**
 * Uniform grid t_i = i * dt, i = 0..n, with the delay spanning exactly m steps.
 *
 * Both tf and tau must be integer multiples of dt (relative tolerance 1e-9);
 * delayed values are read by index shift, never interpolated.
 */
struct Grid {
    double tf = 0;
    double dt = 0;
    std::ptrdiff_t n = 0;
    std::ptrdiff_t m = 0;

    /// Throws NonCommensurateDelay if tau/dt is not an integer, ValidationError for bad tf/dt.
    static Grid make(double tf, double dt, double tau);

    double time(std::ptrdiff_t node) const { return static_cast<double>(node) * dt; }
};

/**
 * Samples of a run on a Grid.
 *
 * `states` holds the history nodes -m..-1 followed by nodes 0..n, so
 * states[k] belongs to node k - m. `controls` is empty or covers nodes 0..n.
 * `adjoints` is empty or covers nodes 0..n+m; the tail n..n+m is zero.
 */
struct Trajectory {
    Grid grid;
    std::vector<State> states;
    std::vector<ControlPair> controls;
    std::vector<Adjoint> adjoints;

    const State& state(std::ptrdiff_t node) const { return states[static_cast<std::size_t>(node + grid.m)]; }
    State& state(std::ptrdiff_t node) { return states[static_cast<std::size_t>(node + grid.m)]; }
    const State& final_state() const { return states.back(); }
    bool has_controls() const { return !controls.empty(); }
    bool has_adjoints() const { return !adjoints.empty(); }
};

struct SimulationOptions {
    /// Sets negative components to zero after every step. Exploratory only.
    bool clamp_nonneg = false;
};

/**
 * Explicit Euler integration by the method of steps.
 *
 * `controls` is either empty (u = 0) or holds one pair per node 0..n.
 * Throws NonFiniteState as soon as a component overflows.
 */
Trajectory simulate(const ModelParams& params, const HistoryFunction& hist, const Grid& grid,
                    std::span<const ControlPair> controls = {}, SimulationOptions options = {});

struct BoundednessCertificate {
    double max_F = 0;
    double F0 = 0;
    double asymptotic_bound = 0; ///< lambda a N / min(d, a/2, mu)
    double bound = 0;            ///< max(F0, asymptotic_bound)
    bool violated = false;
};

/// Evaluates F(t) = aN x(t) + aN y(t+tau) + a/2 v(t+tau) on the grid and checks it
/// against its a priori bound. Throws GridTooShort if n <= m.
BoundednessCertificate boundedness_certificate(const Trajectory& traj, const ModelParams& params);

struct PositivityResult {
    bool ok = true;
    std::optional<std::ptrdiff_t> first_bad_node;
};

PositivityResult positivity_check(const Trajectory& traj, double tolerance = 1e-9);

/// Locale-independent shortest round-trip decimal representation.
std::string format_double(double value);

/// Header t,x,y,v,z plus u1,u2 when controls exist and psi1..psi4 when adjoints exist;
/// one row per node 0..n.
void write_csv(std::ostream& out, const Trajectory& traj);

} // namespace hiv
