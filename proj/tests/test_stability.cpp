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
#include "hivdelay/stability.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace hiv;

namespace {

bool has_note_containing(const StabilityReport& r, std::string_view needle)
{
    return std::any_of(r.notes.begin(), r.notes.end(),
                       [&](const std::string& n) { return n.find(needle) != std::string::npos; });
}

double rel_err(double got, double want)
{
    return std::abs(got - want) / std::abs(want);
}

Verdict eigen_sign(const std::vector<Complex>& eig)
{
    double top = -INFINITY;
    for (const auto& e : eig) {
        top = std::max(top, e.real());
    }
    return top < 0 ? Verdict::Stable : Verdict::Unstable;
}

} // namespace

TEST_CASE("linearization at the disease-free point")
{
    const auto k = reference_params(750);
    const auto pair = linearize(k, disease_free(k));
    CHECK(pair.a1(0, 0) == doctest::Approx(-0.1));
    CHECK(pair.a1(0, 1) == 0);
    CHECK(pair.a1(0, 2) == doctest::Approx(-k.beta * 10));
    CHECK(pair.a1(0, 3) == 0);
    CHECK(pair.a1(3, 3) == doctest::Approx(-k.h_ctl));
    CHECK(pair.a1(3, 0) == 0);
    CHECK(pair.a1(3, 1) == 0);
    CHECK(pair.a2(1, 0) == 0);
    CHECK(pair.a2(1, 2) == doctest::Approx(k.beta * 10));
    Eigen::Matrix4d mask = pair.a2;
    mask(1, 0) = 0;
    mask(1, 2) = 0;
    CHECK(mask.isZero(0));
}

TEST_CASE("CTL proliferation rate vanishes at the full endemic point")
{
    const auto k = reference_params(1500);
    const auto pair = linearize(k, endemic_e2(k));
    CHECK(std::abs(pair.a1(3, 3)) <= 1e-12);
}

TEST_CASE("characteristic function vanishes at the eigenvalues without delay")
{
    oracle::ParamSampler draw(51);
    for (int i = 0; i < 200; ++i) {
        const auto k = draw.full_endemic_feasible();
        for (const auto& eq : {disease_free(k), endemic_e1(k), endemic_e2(k)}) {
            const auto pair = linearize(k, eq);
            for (const auto& z : eigenvalues_tau0(pair)) {
                const double scale = 1 + std::pow(std::abs(z), 4) + std::pow((pair.a1 + pair.a2).norm(), 4);
                REQUIRE(std::abs(char_fn(pair, z, 0)) <= 1e-8 * scale);
            }
        }
    }
}

TEST_CASE("disease-free characteristic function factors")
{
    const auto k = reference_params(750);
    const auto pair = linearize(k, disease_free(k));
    CHECK(std::abs(char_fn(pair, -k.d, 10)) <= 1e-14);
    CHECK(std::abs(char_fn(pair, -k.h_ctl, 10)) <= 1e-14);

    oracle::ParamSampler draw(52);
    for (int i = 0; i < 500; ++i) {
        const auto p = draw.any();
        const auto lin = linearize(p, disease_free(p));
        const Complex z(draw.uniform(-2, 2), draw.uniform(-5, 5));
        const double ratio = p.bigN * p.beta * p.lambda / (p.d * p.mu);
        const Complex expected = (z + p.d) * (z + p.h_ctl) *
                                 (z * z + (p.mu + p.a) * z + p.a * p.mu * (1.0 - ratio * std::exp(-z * p.tau)));
        REQUIRE(std::abs(char_fn(lin, z, p.tau) - expected) <= 1e-8 * (1 + std::abs(expected)));
    }
}

TEST_CASE("disease-free classification")
{
    const auto below = classify_disease_free(reference_params(750));
    CHECK(below.verdict_paper == Verdict::Stable);
    CHECK(below.verdict_numeric_tau0 == Verdict::Stable);
    CHECK(below.verdict_rh_standard == Verdict::Stable);
    for (double x : below.crossing_roots) {
        CHECK(x <= 0);
    }

    const auto above = classify_disease_free(reference_params(1500));
    CHECK(above.verdict_paper == Verdict::Unstable);
    CHECK(above.verdict_numeric_tau0 == Verdict::Unstable);

    const auto edge = classify_disease_free(reference_params(1200));
    CHECK(edge.verdict_paper == Verdict::Inconclusive);
}

TEST_CASE("CTL-free classification at the reference point")
{
    const auto r = classify_e1(reference_params(1500));
    CHECK(r.verdict_paper == Verdict::Unstable);
    CHECK(r.verdict_numeric_tau0 == Verdict::Unstable);
    CHECK(r.verdict_rh_standard == Verdict::Unstable);
    CHECK(r.detail("explicit_root") == doctest::Approx(0.04).epsilon(1e-10));
    CHECK(r.crossing_poly.has_value());
    CHECK(r.crossing_poly->degree() == 3);
}

TEST_CASE("CTL-free explicit root is the CTL growth rate")
{
    oracle::ParamSampler draw(53);
    for (int i = 0; i < 500; ++i) {
        const auto k = draw.any();
        const auto r = classify_e1(k);
        const State e = r.equilibrium.point;
        const double growth = k.c * e.x * e.y - k.h_ctl;
        REQUIRE(r.detail("explicit_root") == doctest::Approx(growth).epsilon(1e-9).scale(1 + k.h_ctl));
    }
}

TEST_CASE("CTL-free cubic factor: matrix cubic divides exactly, closed form mismatch is reported")
{
    oracle::ParamSampler draw(54);
    for (int i = 0; i < 500; ++i) {
        const auto k = draw.ctl_free_feasible();
        const auto r = classify_e1(k);
        REQUIRE(r.detail("division_remainder") <= 1e-10);
        REQUIRE(r.detail("cubic_gap_matrix") <= 1e-8);
        if (r.detail("cubic_gap_stated") > 1e-8) {
            REQUIRE(has_note_containing(r, "closed-form cubic"));
        }
    }
}

TEST_CASE("crossing cubic constant equals C^2 - g2^2 and its closed form")
{
    oracle::ParamSampler draw(55);
    for (int i = 0; i < 500; ++i) {
        const auto k = draw.any();
        const auto r = classify_e1(k);
        const double C = r.detail("C");
        const double g2 = r.detail("g2");
        REQUIRE(r.detail("F0") == doctest::Approx(C * C - g2 * g2).epsilon(1e-12));
        const double aN = k.a * k.bigN;
        const double closed = aN * aN * k.lambda * k.lambda * k.beta * k.beta -
                              2 * k.a * k.a * k.lambda * k.beta * k.bigN * k.d * k.mu;
        REQUIRE(r.detail("F0") ==
                doctest::Approx(closed).epsilon(1e-9).scale(k.a * k.a * k.d * k.d * k.mu * k.mu));
        const double stated = r.detail("F0_stated");
        if (std::abs(stated - r.detail("F0")) > 1e-9 * std::abs(stated)) {
            REQUIRE(has_note_containing(r, "F(0)"));
        }
    }
}

TEST_CASE("threshold verdicts match eigenvalues without delay")
{
    oracle::ParamSampler draw(56);
    int conclusive = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto k = draw.any();
        const auto ef = classify_disease_free(k);
        if (ef.verdict_paper != Verdict::Inconclusive && ef.verdict_numeric_tau0 != Verdict::Inconclusive) {
            REQUIRE(ef.verdict_paper == ef.verdict_numeric_tau0);
            ++conclusive;
        }
        if (condition_values(k).cond_ef > 1e-9) {
            const auto e1 = classify_e1(k);
            if (e1.verdict_paper != Verdict::Inconclusive && e1.verdict_numeric_tau0 != Verdict::Inconclusive) {
                REQUIRE(e1.verdict_paper == e1.verdict_numeric_tau0);
                REQUIRE(e1.verdict_rh_standard == e1.verdict_numeric_tau0);
            }
        }
    }
    CHECK(conclusive > 990);
}

TEST_CASE("full endemic classification at the reference point")
{
    const auto r = classify_e2_tau0(reference_params(1500));
    CHECK(r.verdict_numeric_tau0 == Verdict::Stable);
    CHECK(r.verdict_rh_standard == Verdict::Stable);
    CHECK(r.verdict_paper == Verdict::Stable);
    CHECK(eigen_sign(r.eigenvalues) == Verdict::Stable);
    CHECK(r.detail("quartic_gap_matrix") <= 1e-12);
    CHECK(has_note_containing(r, "closed-form quartic"));
}

TEST_CASE("full endemic classification requires existence")
{
    auto k = reference_params(1500);
    k.c = 0.001;
    try {
        classify_e2_tau0(k);
        FAIL("expected InfeasibleEquilibrium");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InfeasibleEquilibrium);
    }
}

TEST_CASE("corrected quartic coefficients match the matrix characteristic polynomial")
{
    oracle::ParamSampler draw(57);
    for (int i = 0; i < 500; ++i) {
        const auto r = classify_e2_tau0(draw.full_endemic_feasible());
        REQUIRE(r.detail("quartic_gap_matrix") <= 1e-8);
    }
}

TEST_CASE("standard Routh-Hurwitz agrees with eigenvalues at the full endemic point")
{
    oracle::ParamSampler draw(58);
    int conclusive = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto r = classify_e2_tau0(draw.full_endemic_feasible());
        if (r.verdict_rh_standard != Verdict::Inconclusive && r.verdict_numeric_tau0 != Verdict::Inconclusive) {
            REQUIRE(*r.verdict_rh_standard == r.verdict_numeric_tau0);
            ++conclusive;
        }
    }
    CHECK(conclusive > 900);
}

TEST_CASE("zero CTL level makes the quartic constant vanish")
{
    auto k = reference_params(1500);
    k.c = 0.025;
    const auto r = classify_e2_tau0(k);
    CHECK(std::abs(r.detail("H")) <= kSignDeadZone);
    CHECK(r.verdict_paper == Verdict::Inconclusive);
    CHECK(r.verdict_rh_standard == Verdict::Inconclusive);
}

TEST_CASE("Routh-Hurwitz helpers")
{
    // (z + 1)(z + 2)(z + 3)
    CHECK(routh_hurwitz_cubic(6, 11, 6) == Verdict::Stable);
    // (z - 1)(z + 2)(z + 3)
    CHECK(routh_hurwitz_cubic(4, 1, -6) == Verdict::Unstable);
    // z (z + 1)(z + 2)
    CHECK(routh_hurwitz_cubic(3, 2, 0) == Verdict::Inconclusive);
    // (z^2 + 1)(z + 1) has p q - r = 0
    CHECK(routh_hurwitz_cubic(1, 1, 1) == Verdict::Inconclusive);
    // (z + 1)^4
    CHECK(routh_hurwitz_quartic(4, 6, 4, 1) == Verdict::Stable);
    // (z^2 - z + 1)(z + 1)^2 = z^4 + z^3 + z^2 + z + 1
    CHECK(routh_hurwitz_quartic(1, 1, 1, 1) == Verdict::Unstable);
}

TEST_CASE("crossing polynomial coefficients at the reference endemic point")
{
    const auto cp = crossing_poly_e2(reference_params(1500));
    CHECK(rel_err(cp.S, 3262009.0 / 360000) <= 1e-12);
    CHECK(rel_err(cp.T, 419609.0 / 4500000) <= 1e-12);
    CHECK(rel_err(cp.U, 1060237.0 / 300000000) <= 1e-12);
    CHECK(rel_err(cp.V, 313.0 / 2000000) <= 1e-12);
    const auto roots = cp.omega_roots();
    REQUIRE(roots.size() == 8);
    for (double w : {0.1550207983, -0.1550207983, 3.008467478, -3.008467478}) {
        const bool found = std::any_of(roots.begin(), roots.end(),
                                       [&](const Complex& r) { return std::abs(r - Complex(0, w)) <= 1e-6; });
        CHECK(found);
    }
    const auto poly = cp.in_omega();
    for (const auto& r : roots) {
        CHECK(root_residual(poly, r) <= 1e-8);
    }
}

TEST_CASE("crossing polynomial with zero constant has an exact zero root")
{
    CrossingPolynomial cp{1, 2, 3, 0};
    const auto roots = cp.omega_roots();
    CHECK(std::count(roots.begin(), roots.end(), Complex(0, 0)) == 2);
}

TEST_CASE("quasi-polynomial at the reference endemic point")
{
    const auto k = reference_params(1500);
    const auto f = e2_quasipolynomial(k, 10);
    CHECK(rel_err(f.quartic[3], 1997.0 / 600) <= 1e-12);
    CHECK(rel_err(f.quartic[2], 121.0 / 120) <= 1e-12);
    CHECK(rel_err(f.quartic[1], 401.0 / 5000) <= 1e-12);
    CHECK(rel_err(f.quartic[0], 1.0 / 2000) <= 1e-12);
    CHECK(rel_err(f.delayed[2], -5.0 / 8) <= 1e-12);
    CHECK(rel_err(f.delayed[1], -1.0 / 16) <= 1e-12);
    CHECK(std::abs(f.delayed[0]) <= 1e-15);
    CHECK(std::abs(f(0.0) - 0.0005) <= 1e-12);

    const auto scan = quasipoly_real_axis_scan(k, 10, 0, 10, 10000);
    CHECK(scan.samples.size() == 10000);
    CHECK(scan.sign_changes.empty());
    CHECK(scan.min_value > 0);
    CHECK(scan.notes.empty());
}

TEST_CASE("quasi-polynomial matches the determinant once the p h z sign is corrected")
{
    oracle::ParamSampler draw(59);
    for (int i = 0; i < 200; ++i) {
        const auto k = draw.full_endemic_feasible();
        const auto f = e2_quasipolynomial(k, k.tau);
        const auto pair = linearize(k, endemic_e2(k));
        const double z = draw.uniform(0, 3);
        const double det = char_fn(pair, Complex(z, 0), k.tau).real();
        const double zbar = endemic_e2(k).point.z;
        const double corrected = f(z) + 2 * k.p * k.h_ctl * zbar * z * z;
        REQUIRE(corrected == doctest::Approx(det).epsilon(1e-9).scale(1 + std::pow(z, 4) + std::abs(det)));
    }
}

TEST_CASE("quasi-polynomial without delay is a plain quartic")
{
    oracle::ParamSampler draw(60);
    for (int i = 0; i < 100; ++i) {
        const auto k = draw.full_endemic_feasible();
        const auto f = e2_quasipolynomial(k, 0);
        const double z = draw.uniform(0, 5);
        double plain = 0;
        for (int c = 4; c >= 0; --c) {
            plain = plain * z + f.quartic[static_cast<std::size_t>(c)] +
                    (c <= 2 ? f.delayed[static_cast<std::size_t>(c)] : 0.0);
        }
        REQUIRE(f(z) == doctest::Approx(plain).epsilon(1e-12));
        REQUIRE(std::abs(f(Complex(z, 0)).real() - f(z)) <= 1e-12 * (1 + std::abs(f(z))));
    }
}

TEST_CASE("real-axis scan validates its interval")
{
    const auto k = reference_params(1500);
    CHECK_THROWS_AS(quasipoly_real_axis_scan(k, 10, -1, 1, 10), Error);
    CHECK_THROWS_AS(quasipoly_real_axis_scan(k, 10, 0, 1, 1), Error);
}
