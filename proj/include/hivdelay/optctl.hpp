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

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace hiv {

/**
 * Right-hand side of the costate system.
 *
 * When `gate` is false (t > tf - tau) the advanced arguments are never read,
 * so callers may pass anything there.
 */
Adjoint adjoint_rhs(const State& now, const Adjoint& adj, const ControlPair& u, const Adjoint& adj_advanced,
                    const ControlPair& u_advanced, bool gate, const ModelParams& params);

/// Pointwise maximizer of the Hamiltonian, clamped to [0,1]^2.
ControlPair control_from_costate(const State& now, const State& delayed, const Adjoint& adj,
                                 const ModelParams& params, const ObjectiveWeights& weights);

struct OptimalSolution {
    Trajectory trajectory; ///< states, controls (nodes 0..n) and adjoints (nodes 0..n+m)
    double objective = 0;
    std::size_t iterations = 0;
    std::optional<bool> converged; ///< set by the iterated sweep only
    std::vector<std::string> notes;
};

/**
 * One loop that steps the state forward and the costate backward in the same
 * iteration, updating the control at node i + 1 from the freshly computed
 * costate. Controls at nodes not yet reached read as zero.
 */
OptimalSolution sweep_single_pass(const ModelParams& params, const HistoryFunction& hist, const Grid& grid,
                                  const ObjectiveWeights& weights);

struct SweepOptions {
    double tol = 1e-4;          ///< max-norm control change that counts as converged
    std::size_t max_iter = 200;
    double relax = 0.5;         ///< u <- (1 - relax) u_old + relax u_new
};

/// Classic forward-backward sweep repeated until the controls settle.
OptimalSolution sweep_iterated(const ModelParams& params, const HistoryFunction& hist, const Grid& grid,
                               const ObjectiveWeights& weights, SweepOptions options = {});

/// Trapezoidal rule over nodes 0..n. Throws MissingControls without controls.
double evaluate_objective(const Trajectory& traj, const ObjectiveWeights& weights);

struct ControlSummary {
    std::size_t u1_switch_count = 0; ///< sign changes of u1 - 0.5 between consecutive nodes
    double u2_mean = 0;
    double u2_fraction_above_08 = 0;
};

ControlSummary summarize_controls(const Trajectory& traj);

} // namespace hiv
