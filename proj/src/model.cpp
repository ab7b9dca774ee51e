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

#include "hivdelay/model.hpp"

#include "hivdelay/errors.hpp"

#include <algorithm>
#include <cmath>

namespace hiv {

namespace {

void require_positive(const char* key, double value)
{
    if (!std::isfinite(value) || value <= 0) {
        throw Error::validation(key, "must be a finite positive number");
    }
}

void require_nonnegative(const char* key, double value)
{
    if (!std::isfinite(value) || value < 0) {
        throw Error::validation(key, "must be a finite nonnegative number");
    }
}

void require_range(const char* key, double value, double lo, double hi)
{
    if (value < lo || value > hi) {
        throw Error::validation(key, "outside literature range [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
    }
}

} // namespace

void ModelParams::validate() const
{
    require_positive("lambda", lambda);
    require_positive("d", d);
    require_positive("beta", beta);
    require_positive("a", a);
    require_positive("p", p);
    require_positive("c", c);
    require_positive("h_ctl", h_ctl);
    require_positive("bigN", bigN);
    require_positive("mu", mu);
    require_nonnegative("tau", tau);
}

void ModelParams::validate_ranges() const
{
    validate();
    require_range("lambda", lambda, 1, 10);
    require_range("d", d, 0.007, 0.1);
    require_range("beta", beta, 0.00025, 0.5);
    require_range("a", a, 0.2, 0.3);
    require_range("mu", mu, 2.06, 3.81);
    require_range("bigN", bigN, 6.25, 23599.9);
    require_range("c", c, 0.0051, 3.912);
    require_range("h_ctl", h_ctl, 0.004, 8.087);
    require_range("tau", tau, 7, 21);
}

ModelParams reference_params(double bigN)
{
    ModelParams p;
    p.lambda = 1;
    p.d = 0.1;
    p.beta = 0.00025;
    p.a = 0.2;
    p.p = 0.001;
    p.c = 0.03;
    p.h_ctl = 0.2;
    p.bigN = bigN;
    p.mu = 3;
    p.tau = 10;
    return p;
}

double State::max_norm() const
{
    return std::max({std::abs(x), std::abs(y), std::abs(v), std::abs(z)});
}

bool State::is_finite() const
{
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(v) && std::isfinite(z);
}

void HistoryFunction::validate() const
{
    require_nonnegative("x0", x0);
    require_nonnegative("y0", y0);
    require_nonnegative("v0", v0);
    require_nonnegative("z0", z0);
}

void ObjectiveWeights::validate() const
{
    require_positive("A1", A1);
    require_positive("A2", A2);
    require_positive("tf", tf);
}

double Derivative::max_norm() const
{
    return std::max({std::abs(dx), std::abs(dy), std::abs(dv), std::abs(dz)});
}

Derivative rhs_uncontrolled(const State& now, const State& delayed, const ModelParams& k)
{
    return {
        k.lambda - k.d * now.x - k.beta * now.x * now.v,
        k.beta * delayed.x * delayed.v - k.a * now.y - k.p * now.y * now.z,
        k.a * k.bigN * now.y - k.mu * now.v,
        k.c * now.x * now.y * now.z - k.h_ctl * now.z,
    };
}

Derivative rhs_controlled(const State& now, const State& delayed, const ControlPair& u,
                          const ModelParams& k)
{
    // (1 - 0) multiplies exactly, so u = (0, 0) reproduces rhs_uncontrolled bit for bit
    const double infect = k.beta * (1 - u.u1);
    return {
        k.lambda - k.d * now.x - infect * now.x * now.v,
        infect * delayed.x * delayed.v - k.a * now.y - k.p * now.y * now.z,
        k.a * k.bigN * (1 - u.u2) * now.y - k.mu * now.v,
        k.c * now.x * now.y * now.z - k.h_ctl * now.z,
    };
}

double objective_integrand(double x, double z, const ControlPair& u, const ObjectiveWeights& w)
{
    return x + z - 0.5 * w.A1 * u.u1 * u.u1 - 0.5 * w.A2 * u.u2 * u.u2;
}

} // namespace hiv
