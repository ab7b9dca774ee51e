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

#include <array>
#include <string>

namespace hiv {

/**
 * Biological constants of the delayed HIV/CTL model.
 *
 * Units: concentrations are per microlitre, rates per day.
 * `h_ctl` is the CTL death rate; the integration step is always called `dt`.
 */
struct ModelParams {
    double lambda = 0; ///< source rate of CD4+ T cells
    double d = 0;      ///< decay rate of healthy cells
    double beta = 0;   ///< infection rate
    double a = 0;      ///< death rate of infected cells
    double p = 0;      ///< CTL killing rate
    double c = 0;      ///< CTL activation rate
    double h_ctl = 0;  ///< CTL death rate
    double bigN = 0;   ///< virions released per infected cell
    double mu = 0;     ///< virus clearance rate
    double tau = 0;    ///< intracellular delay in days

    /// Throws ValidationError naming the first offending field.
    void validate() const;

    /// Checks the literature ranges (lambda 1-10, d 0.007-0.1, ...). The
    /// range for p is printed backwards in the source table, so p is only
    /// required to be positive.
    void validate_ranges() const;
};

/// Parameter values of the reference scenarios (N differs per scenario).
ModelParams reference_params(double bigN);

struct State {
    double x = 0; ///< uninfected cells
    double y = 0; ///< infected cells
    double v = 0; ///< free virus
    double z = 0; ///< CTL cells

    std::array<double, 4> as_array() const { return {x, y, v, z}; }
    double max_norm() const;
    bool is_finite() const;
    friend bool operator==(const State&, const State&) = default;
};

/// Constant initial function on [-tau, 0].
struct HistoryFunction {
    double x0 = 0;
    double y0 = 0;
    double v0 = 0;
    double z0 = 0;

    void validate() const;
    State state() const { return {x0, y0, v0, z0}; }
};

struct ControlPair {
    double u1 = 0; ///< blocks new infections
    double u2 = 0; ///< inhibits virion production

    bool in_bounds() const { return u1 >= 0 && u1 <= 1 && u2 >= 0 && u2 <= 1; }
    friend bool operator==(const ControlPair&, const ControlPair&) = default;
};

struct ObjectiveWeights {
    double A1 = 0;
    double A2 = 0;
    double tf = 0;

    void validate() const;
};

/// Costates of the four state components.
struct Adjoint {
    double psi1 = 0;
    double psi2 = 0;
    double psi3 = 0;
    double psi4 = 0;

    friend bool operator==(const Adjoint&, const Adjoint&) = default;
};

struct Derivative {
    double dx = 0;
    double dy = 0;
    double dv = 0;
    double dz = 0;

    double max_norm() const;
};

/// Right-hand side of the delayed system; `delayed` is the state at t - tau.
Derivative rhs_uncontrolled(const State& now, const State& delayed, const ModelParams& params);

/// Same system with drug efficacies u1 (infection) and u2 (virion production).
Derivative rhs_controlled(const State& now, const State& delayed, const ControlPair& u,
                          const ModelParams& params);

/// x + z - A1/2 u1^2 - A2/2 u2^2
double objective_integrand(double x, double z, const ControlPair& u, const ObjectiveWeights& w);

} // namespace hiv
