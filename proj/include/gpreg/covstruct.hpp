/*
   Copyright 2026 The gpreg Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "gpreg/errors.hpp"
#include "gpreg/kernels.hpp"

namespace gpreg {

// Correlation structure of (X_0, Xdot_0 / sigma) against (X_t, Xdot_t / sigma), sigma^2 = -r''(0).
struct AMatrix {
    double t = 0.0;
    Eigen::Matrix2d m = Eigen::Matrix2d::Identity();

    double a11() const { return m(0, 0); }
    double a12() const { return m(0, 1); }
    double a21() const { return m(1, 0); }
    double a22() const { return m(1, 1); }
};

AMatrix a_matrix(const Kernel& kernel, double t);

// sqrt(sum of squared entries)
template <class Derived>
typename Derived::Scalar hs_sum_norm(const Eigen::MatrixBase<Derived>& a) {
    return a.norm();
}
inline double hs_sum_norm(const AMatrix& a) { return hs_sum_norm(a.m); }

// Largest singular value; closed form for 2x2, SVD otherwise.
template <class Derived>
typename Derived::Scalar operator_norm(const Eigen::MatrixBase<Derived>& a) {
    using std::hypot;
    using S = typename Derived::Scalar;
    if (a.rows() == 2 && a.cols() == 2) {
        const S p = hypot(a(0, 0) + a(1, 1), a(0, 1) - a(1, 0));
        const S q = hypot(a(0, 0) - a(1, 1), a(0, 1) + a(1, 0));
        return (p + q) / S(2);
    }
    using Plain = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
    Eigen::JacobiSVD<Plain> svd(Plain(a.derived()));
    return svd.singularValues().size() ? svd.singularValues()(0) : S(0);
}
inline double operator_norm(const AMatrix& a) { return operator_norm(a.m); }

// A^{(x) n}, first factor most significant
Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, int n);

// c^T A^{(x) n} c by mode products, O(n 2^n); never forms the 2^n x 2^n matrix
template <class Scalar>
Scalar kron_quadratic_form(const Eigen::Matrix<Scalar, 2, 2>& a, const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                           int n) {
    if (n < 0 || c.size() != (Eigen::Index(1) << n)) throw DomainError("kron_quadratic_form: dimension mismatch");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = c;
    const Eigen::Index size = v.size();
    for (int k = 0; k < n; ++k) {
        const Eigen::Index stride = Eigen::Index(1) << (n - 1 - k);
        for (Eigen::Index base = 0; base < size; base += 2 * stride) {
            for (Eigen::Index i = base; i < base + stride; ++i) {
                const Scalar v0 = v(i), v1 = v(i + stride);
                v(i) = a(0, 0) * v0 + a(0, 1) * v1;
                v(i + stride) = a(1, 0) * v0 + a(1, 1) * v1;
            }
        }
    }
    return c.dot(v);
}

// Weights over {1,2}^n; bit (n-1-k) of the flat index is 1 when i_k = 2.
struct ChaosCoefficientVector {
    int n = 0;
    Eigen::VectorXd entries;
};

// Hermite2D(a, b): weight a! b! / n! on every index with exactly a entries equal to 1
ChaosCoefficientVector hermite2d_coefficients(int a, int b);

double tensor_power_quadratic_form(const Kernel& kernel, double t, const ChaosCoefficientVector& c);
double tensor_power_quadratic_form(const AMatrix& a, const ChaosCoefficientVector& c);

// derivatives at 0 of t -> sum of squared entries of A(t)
struct HsExpansion {
    double first = 0.0;
    double second = 0.0;
    double second_error = 0.0;
    double second_analytic = 0.0;  // 2 (r'''' - r''^2) / r''
    double second_printed = 0.0;   // (r'''' - r''^2) / r''
};
HsExpansion hs_expansion_derivatives(const Kernel& kernel);

enum class BoundNorm { Operator, NormalizedHs };

// norm(A(t)) <= 1 - c t^2 on (0, c_prime]
struct QuadraticBoundFit {
    BoundNorm norm = BoundNorm::Operator;
    double c_hat = 0.0;
    double c_prime = 0.0;
    double intercept = 0.0;   // least squares of (1 - norm)/t^2 on a + b t^2
    double slope = 0.0;
    double std_error = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    int samples = 0;
    bool holds = false;
};
QuadraticBoundFit fit_quadratic_bound(const Kernel& kernel, BoundNorm norm = BoundNorm::Operator, int samples = 200);

}  // namespace gpreg
