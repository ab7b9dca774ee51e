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
#include "hivdelay/model.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hiv;

namespace {

void check_derivative(const Derivative& got, double dx, double dy, double dv, double dz)
{
    CHECK(got.dx == doctest::Approx(dx).epsilon(1e-12));
    CHECK(got.dy == doctest::Approx(dy).epsilon(1e-12));
    CHECK(got.dv == doctest::Approx(dv).epsilon(1e-12));
    CHECK(got.dz == doctest::Approx(dz).epsilon(1e-12));
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::IoError;
}

} // namespace

TEST_CASE("uncontrolled field vanishes at the disease-free point")
{
    const auto k = reference_params(750);
    const State s{10, 0, 0, 0};
    check_derivative(rhs_uncontrolled(s, s, k), 0, 0, 0, 0);
}

TEST_CASE("uncontrolled field vanishes at the CTL-free endemic point")
{
    const auto k = reference_params(1500);
    const State s{8, 1, 100, 0};
    const auto f = rhs_uncontrolled(s, s, k);
    CHECK(f.max_norm() <= 1e-12);
}

TEST_CASE("uncontrolled field at the first initial condition")
{
    const auto k = reference_params(1500);
    const State s{5, 1, 1, 2};
    check_derivative(rhs_uncontrolled(s, s, k), 0.49875, -0.20075, 297, -0.1);
}

TEST_CASE("controlled field at half-strength controls")
{
    const auto k = reference_params(1500);
    const State s{5, 1, 1, 2};
    check_derivative(rhs_controlled(s, s, {0.5, 0.5}, k), 0.499375, -0.201375, 147, -0.1);
}

TEST_CASE("full controls leave the disease-free point fixed")
{
    const auto k = reference_params(1500);
    const State s{10, 0, 0, 0};
    check_derivative(rhs_controlled(s, s, {1, 1}, k), 0, 0, 0, 0);
}

TEST_CASE("objective integrand")
{
    const ObjectiveWeights w{30, 40, 500};
    CHECK(objective_integrand(10, 0, {0, 0}, w) == 10);
    CHECK(objective_integrand(10, 2, {1, 1}, w) == -23);
    CHECK(objective_integrand(0, 0, {0, 0}, w) == 0);
}

TEST_CASE("zero controls reproduce the uncontrolled field bit for bit")
{
    oracle::ParamSampler draw(11);
    for (int i = 0; i < 500; ++i) {
        const auto k = draw.any();
        const State now{draw.uniform(0, 50), draw.uniform(0, 5), draw.uniform(0, 500), draw.uniform(0, 20)};
        const State lag{draw.uniform(0, 50), draw.uniform(0, 5), draw.uniform(0, 500), draw.uniform(0, 20)};
        const auto a = rhs_uncontrolled(now, lag, k);
        const auto b = rhs_controlled(now, lag, {0, 0}, k);
        REQUIRE(a.dx == b.dx);
        REQUIRE(a.dy == b.dy);
        REQUIRE(a.dv == b.dv);
        REQUIRE(a.dz == b.dz);
    }
}

TEST_CASE("infection terms cancel in dx + dy without delay")
{
    oracle::ParamSampler draw(12);
    for (int i = 0; i < 500; ++i) {
        const auto k = draw.any();
        const State s{draw.uniform(0, 50), draw.uniform(0, 5), draw.uniform(0, 500), draw.uniform(0, 20)};
        const auto f = rhs_uncontrolled(s, s, k);
        const double expected = k.lambda - k.d * s.x - k.a * s.y - k.p * s.y * s.z;
        REQUIRE(f.dx + f.dy == doctest::Approx(expected).epsilon(1e-9).scale(1 + k.beta * s.x * s.v));
    }
}

TEST_CASE("field vanishes at every feasible equilibrium")
{
    oracle::ParamSampler draw(13);
    int checked = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto k = draw.any();
        for (const auto& eq : {disease_free(k), endemic_e1(k), endemic_e2(k)}) {
            if (!eq.feasible) {
                continue;
            }
            const auto f = rhs_uncontrolled(eq.point, eq.point, k);
            REQUIRE(f.max_norm() <= 1e-10 * (1 + eq.point.max_norm()));
            ++checked;
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("parameter validation names the offending field")
{
    auto k = reference_params(1500);
    k.d = -1;
    try {
        k.validate();
        FAIL("negative d accepted");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ValidationError);
        CHECK(e.key() == "d");
    }
    k = reference_params(1500);
    k.tau = 0;
    CHECK_NOTHROW(k.validate());
    k.tau = -0.5;
    CHECK(kind_of([&] { k.validate(); }) == ErrorKind::ValidationError);
}

TEST_CASE("literature ranges accept the reference set and reject outliers")
{
    auto k = reference_params(1500);
    CHECK_NOTHROW(k.validate_ranges());
    k.p = 50; // only positivity is enforced for p
    CHECK_NOTHROW(k.validate_ranges());
    k.mu = 10;
    try {
        k.validate_ranges();
        FAIL("mu out of range accepted");
    } catch (const Error& e) {
        CHECK(e.key() == "mu");
    }
}

TEST_CASE("history and weights validation")
{
    CHECK(kind_of([] { HistoryFunction{-1, 0, 0, 0}.validate(); }) == ErrorKind::ValidationError);
    CHECK_NOTHROW(HistoryFunction{0, 0, 0, 0}.validate());
    CHECK(kind_of([] { ObjectiveWeights{0, 40, 500}.validate(); }) == ErrorKind::ValidationError);
    CHECK(kind_of([] { ObjectiveWeights{30, 40, 0}.validate(); }) == ErrorKind::ValidationError);
    CHECK(ControlPair{1, 0}.in_bounds());
    CHECK_FALSE(ControlPair{1.0000001, 0}.in_bounds());
    CHECK_FALSE(ControlPair{0, -1e-300}.in_bounds());
}
