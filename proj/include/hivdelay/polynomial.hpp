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

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace hiv {

using Complex = std::complex<double>;

/**
 * Real univariate polynomial, coefficients stored constant term first.
 *
 * High-order exact zeros are trimmed on construction so the leading
 * coefficient is always nonzero; the zero polynomial is rejected.
 */
class Polynomial {
public:
    explicit Polynomial(std::vector<double> coeffs);
    Polynomial(std::initializer_list<double> coeffs);

    std::size_t degree() const { return coeffs_.size() - 1; }
    const std::vector<double>& coeffs() const { return coeffs_; }
    double operator[](std::size_t i) const { return coeffs_[i]; }
    double leading() const { return coeffs_.back(); }

    double operator()(double x) const;
    Complex operator()(Complex z) const;

    /// Roots from the eigenvalues of the companion matrix, refined by a few
    /// Newton steps. Exact zero constant terms give exactly-zero roots.
    /// Sorted by real part, then imaginary part.
    std::vector<Complex> roots() const;

    /// Roots whose imaginary part is below tol * (1 + |root|), as reals.
    std::vector<double> real_roots(double tol = 1e-9) const;

    /// Monic-free long division; returns {quotient, remainder}.
    std::pair<Polynomial, std::vector<double>> divide(const Polynomial& divisor) const;

    /// p(z) with z -> z^2 substituted, i.e. coefficients spread onto even powers.
    Polynomial in_squared_variable() const;

    Polynomial operator*(const Polynomial& other) const;

private:
    std::vector<double> coeffs_;
};

/// Coefficients of det(zI - A) from sums of principal minors (order <= 16).
Polynomial characteristic_polynomial(const Eigen::MatrixXd& matrix);

/// |p(r)| relative to 1 + |r|^degree, the residual measure used for reported roots.
double root_residual(const Polynomial& p, Complex r);

} // namespace hiv
