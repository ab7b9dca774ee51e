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

#include "hivdelay/polynomial.hpp"

#include "hivdelay/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hiv {

Polynomial::Polynomial(std::vector<double> coeffs)
    : coeffs_(std::move(coeffs))
{
    while (!coeffs_.empty() && coeffs_.back() == 0.0) {
        coeffs_.pop_back();
    }
    if (coeffs_.empty()) {
        throw Error(ErrorKind::ValidationError, "zero polynomial has no leading coefficient");
    }
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : Polynomial(std::vector<double>(coeffs))
{
}

double Polynomial::operator()(double x) const
{
    double acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

Complex Polynomial::operator()(Complex z) const
{
    Complex acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * z + *it;
    }
    return acc;
}

namespace {

Complex derivative_at(const std::vector<double>& c, Complex z)
{
    Complex acc = 0;
    for (std::size_t i = c.size() - 1; i >= 1; --i) {
        acc = acc * z + static_cast<double>(i) * c[i];
    }
    return acc;
}

} // namespace

std::vector<Complex> Polynomial::roots() const
{
    std::vector<Complex> out;
    std::size_t lo = 0;
    while (coeffs_[lo] == 0.0) {
        out.emplace_back(0.0, 0.0);
        ++lo;
    }
    const std::vector<double> c(coeffs_.begin() + static_cast<std::ptrdiff_t>(lo), coeffs_.end());
    const auto deg = static_cast<Eigen::Index>(c.size() - 1);
    if (deg >= 1) {
        Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
        for (Eigen::Index i = 1; i < deg; ++i) {
            companion(i, i - 1) = 1;
        }
        for (Eigen::Index i = 0; i < deg; ++i) {
            companion(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
        }
        Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
        const Polynomial reduced(c);
        for (Eigen::Index i = 0; i < deg; ++i) {
            Complex r = solver.eigenvalues()[i];
            // polish; keep the step only when the residual improves
            for (int iter = 0; iter < 4; ++iter) {
                const Complex f = reduced(r);
                const Complex df = derivative_at(c, r);
                if (std::abs(df) == 0.0) {
                    break;
                }
                const Complex candidate = r - f / df;
                if (std::abs(reduced(candidate)) < std::abs(f)) {
                    r = candidate;
                } else {
                    break;
                }
            }
            if (r.imag() == 0.0) {
                r = Complex(r.real(), 0.0);
            }
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
        if (a.real() != b.real()) {
            return a.real() < b.real();
        }
        return a.imag() < b.imag();
    });
    return out;
}

std::vector<double> Polynomial::real_roots(double tol) const
{
    std::vector<double> out;
    for (const auto& r : roots()) {
        if (std::abs(r.imag()) <= tol * (1 + std::abs(r))) {
            out.push_back(r.real());
        }
    }
    return out;
}

std::pair<Polynomial, std::vector<double>> Polynomial::divide(const Polynomial& divisor) const
{
    std::vector<double> rem = coeffs_;
    const std::size_t dd = divisor.degree();
    if (degree() < dd) {
        throw Error(ErrorKind::ValidationError, "divisor degree exceeds dividend degree");
    }
    std::vector<double> quot(degree() - dd + 1, 0.0);
    for (std::size_t k = quot.size(); k-- > 0;) {
        const double q = rem[k + dd] / divisor.leading();
        quot[k] = q;
        for (std::size_t j = 0; j <= dd; ++j) {
            rem[k + j] -= q * divisor[j];
        }
    }
    rem.resize(dd == 0 ? 1 : dd);
    return {Polynomial(quot), rem};
}

Polynomial Polynomial::in_squared_variable() const
{
    std::vector<double> spread(2 * coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        spread[2 * i] = coeffs_[i];
    }
    return Polynomial(spread);
}

Polynomial Polynomial::operator*(const Polynomial& other) const
{
    std::vector<double> prod(coeffs_.size() + other.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
            prod[i + j] += coeffs_[i] * other.coeffs_[j];
        }
    }
    return Polynomial(prod);
}

Polynomial characteristic_polynomial(const Eigen::MatrixXd& matrix)
{
    const auto n = static_cast<int>(matrix.rows());
    if (n != matrix.cols() || n > 16) {
        throw std::invalid_argument("characteristic_polynomial needs a square matrix of order <= 16");
    }
    // det(zI - A) = sum_k (-1)^k E_k z^(n-k), E_k the sum of k x k principal minors.
    // Each minor is an LU determinant, which keeps small coefficients accurate when
    // the entries span many orders of magnitude.
    std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
    c[static_cast<std::size_t>(n)] = 1.0;
    for (unsigned mask = 1; mask < (1U << n); ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < n; ++i) {
            if (mask & (1U << i)) {
                idx.push_back(i);
            }
        }
        const auto k = static_cast<int>(idx.size());
        Eigen::MatrixXd sub(k, k);
        for (int r = 0; r < k; ++r) {
            for (int q = 0; q < k; ++q) {
                sub(r, q) = matrix(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(q)]);
            }
        }
        const double minor = k == 1 ? sub(0, 0) : sub.partialPivLu().determinant();
        c[static_cast<std::size_t>(n - k)] += (k % 2 == 0 ? 1.0 : -1.0) * minor;
    }
    return Polynomial(c);
}

double root_residual(const Polynomial& p, Complex r)
{
    return std::abs(p(r)) / (1 + std::pow(std::abs(r), static_cast<double>(p.degree())));
}

} // namespace hiv
