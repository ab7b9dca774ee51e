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

#include "hivdelay/equilibria.hpp"
#include "hivdelay/model.hpp"
#include "hivdelay/polynomial.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hiv {

enum class Verdict { Stable, Unstable, Inconclusive };

std::string_view to_string(Verdict v);

/// Quantities closer to zero than this are treated as having no sign.
inline constexpr double kSignDeadZone = 1e-12;

/// Linearization dX/dt = a1 X(t) + a2 X(t - tau) about a steady state.
struct LinearizationPair {
    Eigen::Matrix4d a1;
    Eigen::Matrix4d a2; ///< only row 1 (infected cells), columns 0 and 2, are nonzero
};

LinearizationPair linearize(const ModelParams& params, const Equilibrium& eq);

/// det(zeta I - a1 - exp(-zeta tau) a2)
Complex char_fn(const LinearizationPair& pair, Complex zeta, double tau);

/// Eigenvalues of a1 + a2, sorted by real part.
std::vector<Complex> eigenvalues_tau0(const LinearizationPair& pair);

/// Stable if every real part is below -tol, Unstable if one exceeds tol.
/// tol scales with the matrix norm: kSignDeadZone * (1 + |a1 + a2|).
Verdict eigenvalue_verdict(const LinearizationPair& pair);

/// Routh-Hurwitz verdict for a monic cubic z^3 + p z^2 + q z + r.
Verdict routh_hurwitz_cubic(double p, double q, double r);

/// Routh-Hurwitz verdict for a monic quartic z^4 + e z^3 + f z^2 + g z + h.
Verdict routh_hurwitz_quartic(double e, double f, double g, double h);

struct StabilityReport {
    Equilibrium equilibrium;
    Verdict verdict_paper = Verdict::Inconclusive; ///< sign criterion of the stability theorem
    std::optional<Verdict> verdict_rh_standard;    ///< Routh-Hurwitz on matrix-consistent coefficients
    Verdict verdict_numeric_tau0 = Verdict::Inconclusive;
    std::optional<Polynomial> crossing_poly;       ///< in X = omega^2
    std::vector<double> crossing_roots;            ///< real roots X of crossing_poly
    std::vector<Complex> eigenvalues;              ///< of a1 + a2
    std::vector<std::pair<std::string, double>> details;
    std::vector<std::string> notes;

    /// Value of a named detail; throws std::out_of_range when absent.
    double detail(std::string_view name) const;
};

/// Threshold N beta lambda - d mu decides stability for every delay.
StabilityReport classify_disease_free(const ModelParams& params);

/// Sign of beta N (mu c lambda - beta h a N) - mu^2 c d decides stability of
/// the CTL-free point; reports the cubic factor, its Routh-Hurwitz test and
/// the crossing cubic F(X).
StabilityReport classify_e1(const ModelParams& params);

/// Undelayed quartic at the full endemic point: the closed-form sign test,
/// the standard Routh-Hurwitz test and the eigenvalues side by side.
/// Throws InfeasibleEquilibrium unless lambda mu c - beta a N h > 0.
StabilityReport classify_e2_tau0(const ModelParams& params);

/// omega^8 + S omega^6 + T omega^4 + U omega^2 + V from the imaginary-axis
/// crossing condition at the full endemic point.
struct CrossingPolynomial {
    double S = 0;
    double T = 0;
    double U = 0;
    double V = 0;

    Polynomial in_omega() const;
    Polynomial in_x() const;
    std::vector<Complex> omega_roots() const { return in_omega().roots(); }
};

CrossingPolynomial crossing_poly_e2(const ModelParams& params);

/**
 * Closed-form characteristic quasi-polynomial at the full endemic point,
 *   f(z) = quartic(z) + exp(-z tau) * delayed(z),
 * with coefficients stored constant term first.
 */
struct QuasiPolynomial {
    std::array<double, 5> quartic{};
    std::array<double, 3> delayed{};
    double tau = 0;

    Complex operator()(Complex zeta) const;
    double operator()(double zeta) const;
};

QuasiPolynomial e2_quasipolynomial(const ModelParams& params, double tau);

struct RealAxisScan {
    std::vector<std::pair<double, double>> samples; ///< (zeta, f(zeta))
    std::vector<std::size_t> sign_changes;          ///< i where f(s_i) and f(s_{i+1}) differ in sign
    double min_value = 0;
    std::vector<std::string> notes;
};

/// Samples the quasi-polynomial on [lo, hi] (lo >= 0, samples >= 2).
RealAxisScan quasipoly_real_axis_scan(const ModelParams& params, double tau, double lo, double hi,
                                      std::size_t samples);

} // namespace hiv
