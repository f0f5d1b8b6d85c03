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

#include "gpreg/covstruct.hpp"

#include <algorithm>
#include <bit>
#include <unsupported/Eigen/KroneckerProduct>

namespace gpreg {

AMatrix a_matrix(const Kernel& kernel, double t) {
    const double s2 = -r_derivative_at_zero(kernel, 2);
    const double s = std::sqrt(s2);
    AMatrix a;
    a.t = t;
    if (t == 0.0) return a;
    const double r1 = r_derivative(kernel, 1, t);
    a.m(0, 0) = r_eval(kernel, t);
    a.m(0, 1) = -r1 / s;
    a.m(1, 0) = r1 / s;
    a.m(1, 1) = -r_derivative(kernel, 2, t) / s2;
    return a;
}

Eigen::MatrixXd kron_power(const Eigen::MatrixXd& a, int n) {
    if (n < 0) throw DomainError("kron_power: n must be nonnegative");
    Eigen::MatrixXd out = Eigen::MatrixXd::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        Eigen::MatrixXd next = Eigen::kroneckerProduct(a, out);
        out.swap(next);
    }
    return out;
}

ChaosCoefficientVector hermite2d_coefficients(int a, int b) {
    if (a < 0 || b < 0) throw DomainError("hermite2d_coefficients: negative order");
    const int n = a + b;
    if (n > 24) throw DomainError("hermite2d_coefficients: order too large");
    ChaosCoefficientVector c;
    c.n = n;
    c.entries = Eigen::VectorXd::Zero(Eigen::Index(1) << n);
    // a! b! / n! = 1 / binomial(n, a)
    const double w = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(n + 1.0));
    for (Eigen::Index i = 0; i < c.entries.size(); ++i)
        if (std::popcount(static_cast<unsigned long>(i)) == b) c.entries(i) = w;
    return c;
}

double tensor_power_quadratic_form(const AMatrix& a, const ChaosCoefficientVector& c) {
    if (c.n > 12) throw DomainError("tensor_power_quadratic_form: n > 12");
    return kron_quadratic_form<double>(a.m, c.entries, c.n);
}

double tensor_power_quadratic_form(const Kernel& kernel, double t, const ChaosCoefficientVector& c) {
    return tensor_power_quadratic_form(a_matrix(kernel, t), c);
}

namespace {

double hs_squared(const Kernel& kernel, double t) { return a_matrix(kernel, t).m.squaredNorm(); }

// The squared HS sum has terms |t|^E, E in {2, 4, ...} and, for nonanalytic |t|^p in r,
// E in {p-2+2j} and {2p-4+2j}; the quotient (S(h) - 2) / h^base errs by h^(E - base).
std::vector<double> error_exponents(const Kernel& kernel, double base, int count) {
    std::vector<double> e;
    for (int j = 0; j <= count; ++j) e.push_back(2.0 + 2.0 * j - base);
    if (auto p = nonanalytic_power(kernel)) {
        for (int j = 0; j <= count; ++j) {
            e.push_back(*p - 2.0 + 2.0 * j - base);
            e.push_back(2.0 * *p - 4.0 + 2.0 * j - base);
        }
    }
    std::sort(e.begin(), e.end());
    std::vector<double> out;
    for (double x : e) {
        if (x <= 1e-12) continue;
        if (!out.empty() && std::abs(x - out.back()) < 1e-12) continue;
        out.push_back(x);
    }
    if (int(out.size()) > count) out.resize(count);
    return out;
}

// widths h0 / 2^k; returns the extrapolated value and the change of the last step
std::pair<double, double> richardson(std::vector<double> col, const std::vector<double>& exponents) {
    double prev = col.back();
    for (double e : exponents) {
        if (col.size() < 2) break;
        const double f = std::pow(2.0, e);
        for (size_t k = 0; k + 1 < col.size(); ++k) col[k] = (f * col[k + 1] - col[k]) / (f - 1.0);
        col.pop_back();
        if (col.size() >= 2) prev = col[col.size() - 2];
    }
    return {col.back(), std::abs(col.back() - prev)};
}

}  // namespace

HsExpansion hs_expansion_derivatives(const Kernel& kernel) {
    const auto d = r_derivatives_at_zero(kernel);
    if (!d.r2_available) throw NotDifferentiable(kernel.name() + ": " + d.r2_reason);
    if (!d.r4_available) throw NotDifferentiable(kernel.name() + ": " + d.r4_reason);
    HsExpansion out;
    out.second_analytic = 2.0 * d.discriminant / d.r2;
    out.second_printed = d.discriminant / d.r2;
    const double scale = std::min(kernel.length_scale(), 1.0 / std::sqrt(-d.r2));

    // the squared HS sum is even with value 2 at 0
    const int levels = 6;
    const double h0 = 0.25 * scale;
    std::vector<double> d1(levels), d2(levels);
    for (int k = 0; k < levels; ++k) {
        const double h = std::ldexp(h0, -k);
        d2[k] = 2.0 * (hs_squared(kernel, h) - 2.0) / (h * h);
        const double g = std::ldexp(1e-3 * scale, -k);
        d1[k] = (hs_squared(kernel, g) - 2.0) / g;
    }
    out.first = richardson(d1, error_exponents(kernel, 1.0, levels - 1)).first;
    const auto [second, err] = richardson(d2, error_exponents(kernel, 2.0, levels - 1));
    out.second = second;
    out.second_error = err;
    return out;
}

QuadraticBoundFit fit_quadratic_bound(const Kernel& kernel, BoundNorm norm, int samples) {
    if (samples < 8) throw DomainError("fit_quadratic_bound: need at least 8 samples");
    QuadraticBoundFit fit;
    fit.norm = norm;
    fit.samples = samples;
    const double window = 0.5 * std::min(1.0, kernel.length_scale());
    Eigen::VectorXd t(samples), y(samples);
    for (int i = 0; i < samples; ++i) {
        t(i) = window * (i + 1) / samples;
        const auto a = a_matrix(kernel, t(i));
        const double v = norm == BoundNorm::Operator ? operator_norm(a) : hs_sum_norm(a) / std::sqrt(2.0);
        y(i) = (1.0 - v) / (t(i) * t(i));
    }
    Eigen::MatrixXd design(samples, 2);
    design.col(0).setOnes();
    design.col(1) = t.array().square();
    const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(y);
    const Eigen::VectorXd res = y - design * beta;
    fit.intercept = beta(0);
    fit.slope = beta(1);
    fit.std_error = std::sqrt(res.squaredNorm() / (samples - 2));
    fit.min_ratio = y.minCoeff();
    fit.max_ratio = y.maxCoeff();
    fit.c_hat = fit.min_ratio - 3.0 * fit.std_error;
    fit.c_prime = window;
    fit.holds = fit.c_hat > 0.0;
    return fit;
}

}  // namespace gpreg
