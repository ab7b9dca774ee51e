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

#include "hivdelay/equilibria.hpp"

#include "hivdelay/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hiv {

std::string_view to_string(EquilibriumKind kind)
{
    switch (kind) {
    case EquilibriumKind::DiseaseFree:
        return "DiseaseFree";
    case EquilibriumKind::CtlFreeEndemic:
        return "CtlFreeEndemic";
    case EquilibriumKind::FullEndemic:
        return "FullEndemic";
    }
    return "Unknown";
}

Equilibrium disease_free(const ModelParams& k)
{
    return {EquilibriumKind::DiseaseFree, {k.lambda / k.d, 0, 0, 0}, true};
}

Equilibrium endemic_e1(const ModelParams& k)
{
    const double growth = k.lambda * k.beta * k.bigN - k.d * k.mu;
    Equilibrium e;
    e.kind = EquilibriumKind::CtlFreeEndemic;
    e.point = {k.mu / (k.bigN * k.beta), growth / (k.a * k.bigN * k.beta), growth / (k.mu * k.beta), 0};
    e.feasible = growth > 0;
    return e;
}

Equilibrium endemic_e2(const ModelParams& k)
{
    const double lhs = k.lambda * k.mu * k.c;
    const double rhs = k.beta * k.a * k.bigN * k.h_ctl;
    const double denom = lhs - rhs;
    if (std::abs(denom) <= 1e-14 * std::max(std::abs(lhs), std::abs(rhs))) {
        throw Error(ErrorKind::DegenerateDenominator, "lambda mu c - beta a N h vanishes");
    }
    const double x = denom / (k.d * k.mu * k.c);
    Equilibrium e;
    e.kind = EquilibriumKind::FullEndemic;
    e.point = {
        x,
        k.d * k.h_ctl * k.mu / denom,
        k.d * k.h_ctl * k.a * k.bigN / denom,
        k.beta * k.a * k.bigN / (k.mu * k.p) * x - k.a / k.p,
    };
    e.feasible = denom > 0 && e.point.z >= 0;
    return e;
}

ConditionValues condition_values(const ModelParams& k)
{
    ConditionValues cv;
    cv.cond_ef = k.bigN * k.beta * k.lambda - k.d * k.mu;
    cv.cond_e2_exist = k.lambda * k.mu * k.c - k.beta * k.a * k.bigN * k.h_ctl;
    cv.cond_e1_e2 = k.beta * k.bigN * (k.mu * k.c * k.lambda - k.beta * k.h_ctl * k.a * k.bigN) -
                    k.mu * k.mu * k.c * k.d;
    return cv;
}

} // namespace hiv
