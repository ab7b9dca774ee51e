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

// Independently coded reference computations for tests. Nothing here calls
// into the library's integrators or sweeps.

#pragma once

#include "hivdelay/model.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using Vec4 = std::array<double, 4>;

/// Seeded log-uniform draws over the literature parameter ranges.
class ParamSampler {
public:
    explicit ParamSampler(std::uint64_t seed) : rng_(seed) {}

    hiv::ModelParams any();
    /// Rejection-samples until lambda mu c - beta a N h > 0 and the CTL level is positive.
    hiv::ModelParams full_endemic_feasible();
    /// Rejection-samples until the CTL-free endemic point is positive.
    hiv::ModelParams ctl_free_feasible();
    double uniform(double lo, double hi);

private:
    double log_uniform(double lo, double hi);
    std::mt19937_64 rng_;
};

/// Euler on the non-delayed system with optional per-node controls (u ≡ 0 when empty).
std::vector<Vec4> plain_euler(const hiv::ModelParams& k, Vec4 ic, double tf, double dt,
                              const std::vector<double>& u1 = {}, const std::vector<double>& u2 = {});

/// Delayed Euler with a ring buffer and constant controls; returns the trapezoidal objective.
double delayed_constant_control_objective(const hiv::ModelParams& k, Vec4 ic, double tf, double dt, double u1,
                                          double u2, double A1, double A2);

/// Single loop stepping states forward and costates backward, non-delayed system.
double plain_single_pass_objective(const hiv::ModelParams& k, Vec4 ic, double tf, double dt, double A1,
                                   double A2);

/// Iterated forward-backward sweep on the non-delayed system.
double plain_iterated_objective(const hiv::ModelParams& k, Vec4 ic, double tf, double dt, double A1, double A2,
                                double tol, int max_iter, double relax);

} // namespace oracle
