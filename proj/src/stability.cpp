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

#include "hivdelay/stability.hpp"

#include "hivdelay/dde.hpp"
#include "hivdelay/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hiv {

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Stable:
        return "Stable";
    case Verdict::Unstable:
        return "Unstable";
    case Verdict::Inconclusive:
        return "Inconclusive";
    }
    return "Unknown";
}

double StabilityReport::detail(std::string_view name) const
{
    for (const auto& [key, value] : details) {
        if (key == name) {
            return value;
        }
    }
    throw std::out_of_range("no detail named " + std::string(name));
}

namespace {

/// Stable when q < 0, the convention of every threshold quantity here.
Verdict negative_means_stable(double q)
{
    if (q < -kSignDeadZone) {
        return Verdict::Stable;
    }
    if (q > kSignDeadZone) {
        return Verdict::Unstable;
    }
    return Verdict::Inconclusive;
}

/// Stable when every quantity is positive, Unstable when any is negative.
Verdict all_positive(std::initializer_list<double> quantities)
{
    bool all_pos = true;
    for (double q : quantities) {
        if (q < -kSignDeadZone) {
            return Verdict::Unstable;
        }
        all_pos = all_pos && q > kSignDeadZone;
    }
    return all_pos ? Verdict::Stable : Verdict::Inconclusive;
}

/// Combines verdicts of independent factors of one characteristic equation.
Verdict combine(Verdict lhs, Verdict rhs)
{
    if (lhs == Verdict::Unstable || rhs == Verdict::Unstable) {
        return Verdict::Unstable;
    }
    if (lhs == Verdict::Stable && rhs == Verdict::Stable) {
        return Verdict::Stable;
    }
    return Verdict::Inconclusive;
}

/// Largest coefficient gap between a monic closed form and a reference, scaled.
double coefficient_gap(const std::vector<double>& closed_form, const Polynomial& reference)
{
    double gap = 0;
    double scale = 1;
    for (std::size_t i = 0; i < closed_form.size(); ++i) {
        const double ref = i < reference.coeffs().size() ? reference[i] : 0.0;
        gap = std::max(gap, std::abs(closed_form[i] - ref));
        scale = std::max(scale, std::abs(ref));
    }
    return gap / scale;
}

void note_disagreement(StabilityReport& r)
{
    if (r.verdict_paper != Verdict::Inconclusive && r.verdict_numeric_tau0 != Verdict::Inconclusive &&
        r.verdict_paper != r.verdict_numeric_tau0) {
        r.notes.push_back("threshold verdict " + std::string(to_string(r.verdict_paper)) +
                          " disagrees with eigenvalues of a1 + a2 (" +
                          std::string(to_string(r.verdict_numeric_tau0)) + ")");
    }
}

void fill_numeric(StabilityReport& r, const LinearizationPair& pair)
{
    r.eigenvalues = eigenvalues_tau0(pair);
    r.verdict_numeric_tau0 = eigenvalue_verdict(pair);
}

} // namespace

LinearizationPair linearize(const ModelParams& k, const Equilibrium& eq)
{
    const auto [x, y, v, z] = eq.point;
    LinearizationPair pair;
    pair.a1 << -k.d - k.beta * v, 0, -k.beta * x, 0,
               0, -k.a - k.p * z, 0, -k.p * y,
               0, k.a * k.bigN, -k.mu, 0,
               k.c * y * z, k.c * x * z, 0, k.c * x * y - k.h_ctl;
    pair.a2.setZero();
    pair.a2(1, 0) = k.beta * v;
    pair.a2(1, 2) = k.beta * x;
    return pair;
}

Complex char_fn(const LinearizationPair& pair, Complex zeta, double tau)
{
    const Complex lag = std::exp(-zeta * tau);
    const Eigen::Matrix4cd m = zeta * Eigen::Matrix4cd::Identity() - pair.a1.cast<Complex>() -
                               lag * pair.a2.cast<Complex>();
    return m.determinant();
}

std::vector<Complex> eigenvalues_tau0(const LinearizationPair& pair)
{
    Eigen::EigenSolver<Eigen::Matrix4d> solver(pair.a1 + pair.a2, false);
    std::vector<Complex> out(solver.eigenvalues().begin(), solver.eigenvalues().end());
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return out;
}

Verdict eigenvalue_verdict(const LinearizationPair& pair)
{
    const auto eig = eigenvalues_tau0(pair);
    const double tol = kSignDeadZone * (1 + (pair.a1 + pair.a2).norm());
    double max_re = -INFINITY;
    for (const auto& e : eig) {
        max_re = std::max(max_re, e.real());
    }
    if (max_re < -tol) {
        return Verdict::Stable;
    }
    if (max_re > tol) {
        return Verdict::Unstable;
    }
    return Verdict::Inconclusive;
}

Verdict routh_hurwitz_cubic(double p, double q, double r)
{
    return all_positive({p, r, p * q - r});
}

Verdict routh_hurwitz_quartic(double e, double f, double g, double h)
{
    return all_positive({e, g, h, e * f * g - g * g - e * e * h});
}

StabilityReport classify_disease_free(const ModelParams& k)
{
    StabilityReport r;
    r.equilibrium = disease_free(k);
    const double cond = condition_values(k).cond_ef;
    r.verdict_paper = negative_means_stable(cond);

    const double ratio = k.bigN * k.beta * k.lambda / (k.d * k.mu);
    const double a2mu2 = k.a * k.a * k.mu * k.mu;
    r.crossing_poly = Polynomial{a2mu2 * (1 - ratio * ratio), k.a * k.a + k.mu * k.mu, 1.0};
    r.crossing_roots = r.crossing_poly->real_roots();

    // (z + d)(z + h)(z^2 + (mu + a) z + a mu (1 - ratio)) at tau = 0
    const double quad_const = k.a * k.mu * (1 - ratio);
    r.verdict_rh_standard = combine(all_positive({k.d, k.h_ctl}), all_positive({k.mu + k.a, quad_const}));

    const auto pair = linearize(k, r.equilibrium);
    fill_numeric(r, pair);
    r.details = {{"cond_ef", cond}, {"threshold_ratio", ratio}, {"quadratic_constant", quad_const}};
    for (double root : r.crossing_roots) {
        if (root > 0) {
            r.notes.push_back("crossing quadratic has a positive root X = " + format_double(root));
        }
    }
    note_disagreement(r);
    return r;
}

StabilityReport classify_e1(const ModelParams& k)
{
    StabilityReport r;
    r.equilibrium = endemic_e1(k);
    const auto [x, y, v, z] = r.equilibrium.point;
    const double cond = condition_values(k).cond_e1_e2;
    r.verdict_paper = negative_means_stable(cond);

    const double aN = k.a * k.bigN;
    const double bv = k.beta * v;
    const double explicit_root = cond / (k.a * k.bigN * k.bigN * k.beta * k.beta);

    // Cubic factor as stated in closed form
    const double P = k.d + k.mu + k.a + bv;
    const double Q = k.mu * k.d + k.a * k.d + k.a * k.mu + k.mu * bv - aN * k.beta * x;
    const double R = k.a * k.mu * (k.d + bv) - 2 * k.beta * aN * k.d * x;
    // Cubic factor of det(zI - a1 - a2) restricted to the (x, y, v) block
    const double Pm = P;
    const double Qm = k.mu * k.d + k.a * k.d + k.a * k.mu + k.mu * bv + k.a * bv - aN * k.beta * x;
    const double Rm = k.a * k.mu * (k.d + bv) - k.beta * aN * k.d * x;

    // Crossing cubic F(X) for the delayed factor z^3 + A z^2 + B z + C - e^{-z tau}(g1 z + g2)
    const double A = k.d + k.mu + k.a + bv;
    const double B = k.mu * k.d + k.a * k.d + k.a * k.mu + k.mu * bv;
    const double C = k.a * k.mu * (k.d + bv) - k.beta * aN * k.d * x;
    const double g1 = k.beta * aN * x;
    const double g2 = k.beta * aN * k.d * x;
    r.crossing_poly = Polynomial{C * C - g2 * g2, B * B - 2 * A * C - g1 * g1, A * A - 2 * B, 1.0};
    r.crossing_roots = r.crossing_poly->real_roots();
    const double F0 = C * C - g2 * g2;
    const double F0_stated = k.lambda * k.lambda * k.beta * k.beta * aN * aN - k.a * k.a * k.mu * k.mu * k.d * k.d;

    const Verdict cubic_rh_stated = routh_hurwitz_cubic(P, Q, R);
    const Verdict cubic_rh_matrix = routh_hurwitz_cubic(Pm, Qm, Rm);
    r.verdict_rh_standard = combine(negative_means_stable(explicit_root), cubic_rh_matrix);

    const auto pair = linearize(k, r.equilibrium);
    fill_numeric(r, pair);

    r.details = {
        {"cond_e1_e2", cond},
        {"explicit_root", explicit_root},
        {"P", P}, {"Q", Q}, {"R", R},
        {"P_matrix", Pm}, {"Q_matrix", Qm}, {"R_matrix", Rm},
        {"A", A}, {"B", B}, {"C", C}, {"g1", g1}, {"g2", g2},
        {"F0", F0}, {"F0_stated", F0_stated},
    };

    if (!r.equilibrium.feasible) {
        r.notes.push_back("equilibrium is infeasible (lambda beta N - d mu <= 0); verdicts are formal");
    }
    r.notes.push_back("Routh-Hurwitz on the closed-form cubic: " + std::string(to_string(cubic_rh_stated)) +
                      "; on the matrix cubic: " + std::string(to_string(cubic_rh_matrix)));
    const double z_rate = pair.a1(3, 3);
    if (std::abs(z_rate - explicit_root) > 1e-9 * (1 + std::abs(z_rate))) {
        r.notes.push_back("explicit root differs from c x y - h by " + format_double(explicit_root - z_rate));
    }

    // Symbolic vs numeric: divide the 4x4 characteristic polynomial by (z - (c x y - h))
    const Polynomial full = characteristic_polynomial(pair.a1 + pair.a2);
    const auto rem = full.divide(Polynomial{-z_rate, 1.0}).second;
    // z decouples at z = 0, so the cubic is the characteristic polynomial of the leading block
    const Polynomial cubic = characteristic_polynomial((pair.a1 + pair.a2).topLeftCorner<3, 3>());
    const double gap_stated = coefficient_gap({R, Q, P, 1.0}, cubic);
    const double gap_matrix = coefficient_gap({Rm, Qm, Pm, 1.0}, cubic);
    r.details.emplace_back("cubic_gap_stated", gap_stated);
    r.details.emplace_back("cubic_gap_matrix", gap_matrix);
    double magnitude = 0;
    for (std::size_t i = 0; i < full.coeffs().size(); ++i) {
        magnitude += std::abs(full[i]) * std::pow(std::abs(z_rate), static_cast<double>(i));
    }
    // remainder relative to the size of the terms it cancels
    r.details.emplace_back("division_remainder", std::abs(rem[0]) / std::max(magnitude, 1e-300));
    if (gap_stated > 1e-8) {
        r.notes.push_back("closed-form cubic (P, Q, R) differs from the cubic factor of det(zI - a1 - a2): "
                          "scaled coefficient gap " + format_double(gap_stated));
    }
    if (std::abs(F0 - F0_stated) > 1e-9 * std::max({1e-300, std::abs(F0), std::abs(F0_stated)})) {
        r.notes.push_back("F(0) = C^2 - g2^2 = " + format_double(F0) +
                          " differs from lambda^2 beta^2 a^2 N^2 - a^2 mu^2 d^2 = " + format_double(F0_stated));
    }
    for (double root : r.crossing_roots) {
        if (root > 0) {
            r.notes.push_back("crossing cubic F(X) has a positive root X = " + format_double(root));
        }
    }
    note_disagreement(r);
    return r;
}

namespace {

struct E2Coefficients {
    double E, F, G, H;
};

E2Coefficients e2_quartic_stated(const ModelParams& k, const State& s)
{
    const auto [x, y, v, z] = s;
    const double p = k.p, mu = k.mu, a = k.a, d = k.d, h = k.h_ctl, b = k.beta, aN = k.a * k.bigN;
    return {
        mu + a + d + p * z + b * v,
        a * mu + mu * d + a * d + p * mu * z + p * d * z - p * h * z + b * mu * v + a * b * v +
            p * b * z * v - b * aN * x,
        a * d * mu + p * mu * h * z + p * h * d * z + p * mu * d * z + a * mu * b * v + p * h * b * z * v +
            p * mu * b * z * v - b * aN * d * x,
        p * mu * h * d * z + p * mu * h * b * z * v - aN * b * p * h * y * z,
    };
}

} // namespace

StabilityReport classify_e2_tau0(const ModelParams& k)
{
    const auto cv = condition_values(k);
    if (!(cv.cond_e2_exist > 0)) {
        throw Error(ErrorKind::InfeasibleEquilibrium, "lambda mu c - beta a N h must be positive");
    }
    StabilityReport r;
    r.equilibrium = endemic_e2(k);
    const State s = r.equilibrium.point;

    const auto [E, F, G, H] = e2_quartic_stated(k, s);
    // The z^2 coefficient of det(zI - a1 - a2) carries +p h z where the closed form has -p h z.
    const double Fm = F + 2 * k.p * k.h_ctl * s.z;

    Verdict stated;
    if (E < -kSignDeadZone || F < -kSignDeadZone || G < -kSignDeadZone || H < -kSignDeadZone) {
        stated = Verdict::Unstable;
    } else if (E > kSignDeadZone && F > kSignDeadZone && G > kSignDeadZone && H > kSignDeadZone &&
               F * G - E * H > kSignDeadZone) {
        stated = Verdict::Stable;
    } else {
        stated = Verdict::Inconclusive;
    }
    r.verdict_paper = stated;
    r.verdict_rh_standard = routh_hurwitz_quartic(E, Fm, G, H);

    const auto pair = linearize(k, r.equilibrium);
    fill_numeric(r, pair);

    const auto crossing = crossing_poly_e2(k);
    r.crossing_poly = crossing.in_x();
    r.crossing_roots = r.crossing_poly->real_roots();

    r.details = {
        {"cond_e2_exist", cv.cond_e2_exist},
        {"cond_e1_e2", cv.cond_e1_e2},
        {"E", E}, {"F", F}, {"G", G}, {"H", H},
        {"FG_minus_EH", F * G - E * H},
        {"F_matrix", Fm},
        {"S", crossing.S}, {"T", crossing.T}, {"U", crossing.U}, {"V", crossing.V},
    };

    if (!r.equilibrium.feasible) {
        r.notes.push_back("equilibrium has a negative CTL component; verdicts are formal");
    }
    r.notes.push_back("Routh-Hurwitz on the closed-form quartic: " +
                      std::string(to_string(routh_hurwitz_quartic(E, F, G, H))));
    const Polynomial charpoly = characteristic_polynomial(pair.a1 + pair.a2);
    const double gap_stated = coefficient_gap({H, G, F, E, 1.0}, charpoly);
    const double gap_matrix = coefficient_gap({H, G, Fm, E, 1.0}, charpoly);
    r.details.emplace_back("quartic_gap_stated", gap_stated);
    r.details.emplace_back("quartic_gap_matrix", gap_matrix);
    if (gap_stated > 1e-8) {
        r.notes.push_back("closed-form quartic (E, F, G, H) differs from det(zI - a1 - a2): scaled coefficient gap " +
                          format_double(gap_stated) + "; Routh-Hurwitz uses F + 2 p h z");
    }
    if (gap_matrix > 1e-8) {
        r.notes.push_back("corrected quartic still differs from det(zI - a1 - a2): gap " + format_double(gap_matrix));
    }
    const double D_tail = k.a * k.bigN * k.p * k.c * k.beta * s.x * s.z * s.y * s.y;
    const double H_tail = k.a * k.bigN * k.beta * k.p * k.h_ctl * s.y * s.z;
    if (std::abs(D_tail - H_tail) > 1e-9 * (1 + std::abs(H_tail))) {
        r.notes.push_back("delayed-form constant tail a N p c beta x z y^2 differs from a N beta p h y z by " +
                          format_double(D_tail - H_tail));
    }
    if (stated != Verdict::Inconclusive && r.verdict_numeric_tau0 != Verdict::Inconclusive &&
        stated != r.verdict_numeric_tau0) {
        r.notes.push_back("closed-form sign test disagrees with eigenvalues; eigenvalues are authoritative");
    }
    r.notes.push_back("no verdict is given for tau > 0; use the crossing polynomial and real-axis scan as evidence");
    return r;
}

Polynomial CrossingPolynomial::in_omega() const
{
    return Polynomial({V, 0, U, 0, T, 0, S, 0, 1});
}

Polynomial CrossingPolynomial::in_x() const
{
    return Polynomial({V, U, T, S, 1});
}

CrossingPolynomial crossing_poly_e2(const ModelParams& k)
{
    const auto [x, y, v, z] = endemic_e2(k).point;
    const double p = k.p, mu = k.mu, a = k.a, d = k.d, h = k.h_ctl, b = k.beta, c = k.c, N = k.bigN;
    const double I = a * mu + mu * d + a * d + p * mu * z + p * d * z - p * h * z + b * mu * v + a * b * v +
                     p * b * z * v;
    const double J = p * mu * h * d * z + p * mu * h * b * z * v - a * N * p * c * b * x * z * y * y;
    const double Nc = a * d * mu + p * mu * h * z + p * h * d * z + p * mu * d * z + a * mu * b * v +
                      p * h * b * z * v + p * mu * b * z * v;
    const double O = mu + a + d + p * z + b * v;
    const double K2 = b * b * a * a * N * N; // beta^2 a^2 N^2
    const double x2 = x * x, x3 = x2 * x, x4 = x3 * x;

    CrossingPolynomial cp;
    cp.S = O * O - 2 * I;
    cp.T = 2 * J + I * I - 2 * Nc * O - K2 * x2;
    cp.U = 2 * I * J + Nc * Nc - c * c * K2 * y * y * x4 + 2 * c * K2 * h * y * x3 - K2 * h * h * x2 +
           2 * c * K2 * d * y * x3 - 2 * K2 * h * d * x2 - K2 * d * d * x2 - 2 * c * K2 * d * y * x3 +
           2 * K2 * h * d * x2;
    cp.V = J * J + 2 * c * K2 * d * d * h * y * x3 - b * b * h * h * d * d * a * a * N * N * x2;
    return cp;
}

Complex QuasiPolynomial::operator()(Complex zeta) const
{
    Complex q = 0;
    for (auto it = quartic.rbegin(); it != quartic.rend(); ++it) {
        q = q * zeta + *it;
    }
    Complex lagged = 0;
    for (auto it = delayed.rbegin(); it != delayed.rend(); ++it) {
        lagged = lagged * zeta + *it;
    }
    return q + std::exp(-zeta * tau) * lagged;
}

double QuasiPolynomial::operator()(double zeta) const
{
    double q = 0;
    for (auto it = quartic.rbegin(); it != quartic.rend(); ++it) {
        q = q * zeta + *it;
    }
    double lagged = 0;
    for (auto it = delayed.rbegin(); it != delayed.rend(); ++it) {
        lagged = lagged * zeta + *it;
    }
    return q + std::exp(-zeta * tau) * lagged;
}

QuasiPolynomial e2_quasipolynomial(const ModelParams& k, double tau)
{
    const auto [x, y, v, z] = endemic_e2(k).point;
    const double p = k.p, mu = k.mu, a = k.a, d = k.d, h = k.h_ctl, b = k.beta, c = k.c, aN = k.a * k.bigN;
    QuasiPolynomial f;
    f.tau = tau;
    const double A = mu + a + d + p * z + b * v;
    const double B = a * mu + mu * d + a * d + p * mu * z + p * d * z - p * h * z + b * mu * v + a * b * v +
                     p * b * z * v;
    const double C = a * d * mu + p * mu * h * z + p * h * d * z + p * mu * d * z + a * mu * b * v +
                     p * h * b * z * v + p * mu * b * z * v;
    const double D = p * mu * h * d * z + p * mu * h * b * z * v - aN * p * c * b * x * z * y * y;
    f.quartic = {D, C, B, A, 1.0};
    f.delayed = {
        c * b * aN * d * y * x * x - b * h * d * aN * x,
        c * b * aN * y * x * x - b * h * aN * x - b * aN * d * x,
        -b * aN * x,
    };
    return f;
}

RealAxisScan quasipoly_real_axis_scan(const ModelParams& k, double tau, double lo, double hi,
                                      std::size_t samples)
{
    if (!(lo >= 0) || !(hi >= lo)) {
        throw Error::validation("interval", "must satisfy 0 <= lo <= hi");
    }
    if (samples < 2) {
        throw Error::validation("samples", "must be at least 2");
    }
    const QuasiPolynomial f = e2_quasipolynomial(k, tau);
    const auto pair = linearize(k, endemic_e2(k));

    RealAxisScan scan;
    scan.samples.reserve(samples);
    std::size_t matrix_changes = 0;
    double prev_det = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double zeta = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
        const double value = f(zeta);
        scan.samples.emplace_back(zeta, value);
        if (i > 0 && std::signbit(value) != std::signbit(scan.samples[i - 1].second)) {
            scan.sign_changes.push_back(i - 1);
        }
        const double det = char_fn(pair, Complex(zeta, 0), tau).real();
        if (i > 0 && std::signbit(det) != std::signbit(prev_det)) {
            ++matrix_changes;
        }
        prev_det = det;
    }
    scan.min_value = scan.samples.front().second;
    for (const auto& s : scan.samples) {
        scan.min_value = std::min(scan.min_value, s.second);
    }
    if (matrix_changes != scan.sign_changes.size()) {
        scan.notes.push_back("det(zI - a1 - e^{-z tau} a2) changes sign " + std::to_string(matrix_changes) +
                             " times on the same samples versus " + std::to_string(scan.sign_changes.size()) +
                             " for the closed form");
    }
    return scan;
}

} // namespace hiv
