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

#include <string_view>

namespace hiv {

enum class EquilibriumKind { DiseaseFree, CtlFreeEndemic, FullEndemic };

std::string_view to_string(EquilibriumKind kind);

/// Steady state of the delayed system. Endemic points are returned even when
/// infeasible so their stability formulas can still be evaluated.
struct Equilibrium {
    EquilibriumKind kind = EquilibriumKind::DiseaseFree;
    State point;
    bool feasible = true;
};

/// Threshold quantities deciding existence and stability of the steady states.
struct ConditionValues {
    double cond_ef = 0;       ///< N beta lambda - d mu
    double cond_e2_exist = 0; ///< lambda mu c - beta a N h
    double cond_e1_e2 = 0;    ///< beta N (mu c lambda - beta h a N) - mu^2 c d
};

/// (lambda/d, 0, 0, 0)
Equilibrium disease_free(const ModelParams& params);

/// CTL-free endemic point; feasible iff lambda beta N - d mu > 0.
Equilibrium endemic_e1(const ModelParams& params);

/// Endemic point with active CTL response; feasible iff lambda mu c - beta a N h > 0
/// and its z component is nonnegative. Throws DegenerateDenominator when
/// lambda mu c - beta a N h vanishes (1e-14 relative).
Equilibrium endemic_e2(const ModelParams& params);

ConditionValues condition_values(const ModelParams& params);

} // namespace hiv
