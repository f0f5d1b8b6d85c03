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

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "generators.hpp"
#include "gpreg/covstruct.hpp"

using namespace gpreg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Eigen::Matrix2d random_matrix(Gen& g) {
    Eigen::Matrix2d m;
    m << g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1), g.uniform(-1, 1);
    return m;
}

}  // namespace

TEST_CASE("A matrix entries") {
    // mpmath references
    const auto a = a_matrix(Kernel::parse("matern52:ell=1"), 0.4);
    CHECK(rel(a.a11(), 0.88354532941287656887) < 1e-13);
    CHECK(rel(a.a12(), 0.39996085785319536452) < 1e-12);
    CHECK(a.a21() == -a.a12());
    CHECK(rel(a.a22(), 0.44744749496188548341) < 1e-12);

    // sqexp at 0.5: r = e^{-1/4}, sigma^2 = 2
    const auto s = a_matrix(Kernel::parse("sqexp:ell=1"), 0.5);
    const double e = std::exp(-0.25);
    CHECK(rel(s.a11(), e) < 1e-14);
    CHECK(rel(s.a12(), e / std::sqrt(2.0)) < 1e-13);
    CHECK(rel(s.a22(), (2.0 - 4.0 * 0.25) * e / 2.0) < 1e-13);

    for (const char* k : {"sqexp:ell=1", "matern52:ell=2", "rq:alpha=2,ell=1", "periodic:T=2,ell=1", "matern32:ell=1"}) {
        const auto z = a_matrix(Kernel::parse(k), 0.0);
        CHECK((z.m - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    }
    CHECK_THROWS_AS(a_matrix(Kernel::parse("matern12:ell=1"), 0.3), NotDifferentiable);
}

TEST_CASE("matrix norms") {
    CHECK(hs_sum_norm(Eigen::Matrix2d::Identity()) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(hs_sum_norm(Eigen::Matrix2d::Zero()) == 0.0);
    CHECK(operator_norm(Eigen::Matrix2d::Identity()) == doctest::Approx(1.0).epsilon(1e-15));
    Eigen::Matrix2d d = Eigen::Matrix2d::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = 0.5;
    CHECK(operator_norm(d) == doctest::Approx(1.0).epsilon(1e-15));
    for (double th = 0.0; th < 6.3; th += 0.37) {
        Eigen::Matrix2d r;
        r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
        CHECK(std::abs(operator_norm(r) - 1.0) < 1e-14);
    }
    Gen g(51);
    for (int i = 0; i < 200; ++i) {
        const Eigen::Matrix2d m = random_matrix(g);
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(m);
        CHECK(std::abs(operator_norm(m) - svd.singularValues()(0)) < 1e-13);
        CHECK(operator_norm(m) <= hs_sum_norm(m) * (1.0 + 1e-15));
        CHECK(hs_sum_norm(m) <= std::sqrt(2.0) * operator_norm(m) * (1.0 + 1e-14));
    }
}

TEST_CASE("Kronecker powers") {
    Gen g(52);
    for (int i = 0; i < 20; ++i) {
        const Eigen::Matrix2d m = random_matrix(g);
        const double op = operator_norm(m), hs = hs_sum_norm(m);
        for (int n = 1; n <= 6; ++n) {
            const Eigen::MatrixXd k = kron_power(m, n);
            REQUIRE(k.rows() == (1 << n));
            CHECK(rel(operator_norm(k), std::pow(op, n)) < 1e-12);
            CHECK(rel(k.norm(), std::pow(hs, n)) < 1e-12);
            Eigen::VectorXd c(1 << n);
            for (int j = 0; j < c.size(); ++j) c(j) = g.uniform(-1, 1);
            const double direct = c.dot(k * c);
            CHECK(std::abs(kron_quadratic_form<double>(m, c, n) - direct) < 1e-12 * (1.0 + std::abs(direct)));
        }
    }
    const Eigen::Matrix2d m = random_matrix(g);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(2);
    e1(0) = 1.0;
    CHECK(kron_quadratic_form<double>(m, e1, 1) == m(0, 0));
    Eigen::VectorXd e11 = Eigen::VectorXd::Zero(4);
    e11(0) = 1.0;
    CHECK(std::abs(kron_quadratic_form<double>(m, e11, 2) - m(0, 0) * m(0, 0)) < 1e-15);
    Eigen::VectorXd c = Eigen::VectorXd::Constant(8, 0.3);
    CHECK(std::abs(kron_quadratic_form<double>(Eigen::Matrix2d::Identity(), c, 3) - c.squaredNorm()) < 1e-15);
    CHECK_THROWS_AS(kron_quadratic_form<double>(m, c, 2), DomainError);
}

TEST_CASE("Hermite2D coefficient vectors") {
    const auto c = hermite2d_coefficients(2, 1);
    REQUIRE(c.n == 3);
    CHECK(c.entries.size() == 8);
    int nz = 0;
    for (int i = 0; i < 8; ++i)
        if (c.entries(i) != 0.0) {
            ++nz;
            CHECK(std::abs(c.entries(i) - 2.0 / 6.0) < 1e-15);
        }
    CHECK(nz == 3);
    // at t = 0 the form is the squared coefficient norm
    const Kernel k = Kernel::parse("sqexp:ell=1");
    CHECK(std::abs(tensor_power_quadratic_form(k, 0.0, c) - c.entries.squaredNorm()) < 1e-14);
    const auto c11 = hermite2d_coefficients(1, 1);
    const auto a = a_matrix(k, 0.6);
    const double direct = c11.entries.dot(kron_power(a.m, 2) * c11.entries);
    CHECK(std::abs(tensor_power_quadratic_form(a, c11) - direct) < 1e-14);
}

TEST_CASE("Hilbert-Schmidt expansion at 0") {
    const auto se = hs_expansion_derivatives(Kernel::parse("sqexp:ell=1"));
    CHECK(std::abs(se.first) < 1e-8);
    CHECK(std::abs(se.second + 8.0) < 1e-6);
    CHECK(se.second_analytic == doctest::Approx(-8.0).epsilon(1e-14));
    CHECK(se.second_printed == doctest::Approx(-4.0).epsilon(1e-14));
    const auto m = hs_expansion_derivatives(Kernel::parse("matern52:ell=1"));
    CHECK(std::abs(m.second - m.second_analytic) < 1e-5 * std::abs(m.second_analytic));
    CHECK(m.second_analytic == doctest::Approx(-80.0 / 3.0).epsilon(1e-12));
    Gen g(53);
    for (int i = 0; i < 10; ++i) {
        const auto s = g.smooth_kernel();
        CAPTURE(s);
        const auto h = hs_expansion_derivatives(Kernel::parse(s));
        CHECK(std::abs(h.first) < 1e-7);
        CHECK(h.second < 0.0);
        CHECK(std::abs(h.second - h.second_analytic) < 1e-5 * std::abs(h.second_analytic));
    }
}

TEST_CASE("quadratic bounds near 0") {
    // the largest singular value leaves 1 only at fourth order, so its t^2 coefficient vanishes
    const Kernel k = Kernel::parse("sqexp:ell=1");
    for (double t : {0.02, 0.01, 0.005}) {
        const double gap = (1.0 - operator_norm(a_matrix(k, t))) / (t * t);
        CHECK(std::abs(gap) < 5.0 * t);
    }
    const auto op = fit_quadratic_bound(k, BoundNorm::Operator);
    CHECK(op.c_hat <= 0.0);
    CHECK_FALSE(op.holds);
    for (const char* s : {"sqexp:ell=1", "matern52:ell=1", "rq:alpha=2,ell=1", "periodic:T=2,ell=1"}) {
        CAPTURE(s);
        const auto hs = fit_quadratic_bound(Kernel::parse(s), BoundNorm::NormalizedHs);
        CHECK(hs.c_hat > 0.0);
        CHECK(hs.holds);
        CHECK(hs.c_prime > 0.0);
    }
}
