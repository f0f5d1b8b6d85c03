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
#include "gpreg/quadrature.hpp"

using namespace gpreg;

TEST_CASE("adaptive Gauss-Kronrod on smooth and singular integrands") {
    CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0).value == doctest::Approx(9.0).epsilon(1e-14));
    const auto s = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
    CHECK(s.converged);
    CHECK(std::abs(s.value - 2.0) < 1e-10);
    CHECK(std::abs(integrate([](double x) { return std::log(x); }, 0.0, 1.0).value + 1.0) < 1e-11);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0).value == 0.0);
    const auto inf = integrate_to_infinity([](double x) { return std::exp(-x); }, 0.0);
    CHECK(std::abs(inf.value - 1.0) < 1e-12);
    const auto gauss = integrate_to_infinity([](double x) { return std::exp(-x * x); }, 0.0);
    CHECK(std::abs(gauss.value - 0.5 * std::sqrt(std::numbers::pi)) < 1e-12);
}

TEST_CASE("integrate is linear and additive over subintervals") {
    Gen g(21);
    for (int i = 0; i < 50; ++i) {
        const double a = g.uniform(-2.0, 0.0), b = g.uniform(0.5, 3.0), m = g.uniform(a, b);
        const double w = g.uniform(0.5, 4.0);
        auto f = [w](double x) { return std::cos(w * x) * std::exp(-0.3 * x * x); };
        const double whole = integrate(f, a, b).value;
        CHECK(std::abs(whole - integrate(f, a, m).value - integrate(f, m, b).value) < 1e-12);
        CHECK(std::abs(integrate([&](double x) { return 3.0 * f(x); }, a, b).value - 3.0 * whole) < 1e-12);
    }
}

TEST_CASE("Gauss-Legendre is exact to degree 2n - 1") {
    for (int n : {1, 2, 5, 12, 40}) {
        const auto rule = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0.0;
            for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) s += rule.weights(i) * std::pow(rule.nodes(i), d);
            const double exact = d % 2 == 1 ? 0.0 : 2.0 / (d + 1);
            CHECK(std::abs(s - exact) < 1e-13);
        }
    }
}

TEST_CASE("Gauss-Hermite reproduces standard normal moments") {
    const auto rule = gauss_hermite(30);
    CHECK(std::abs(rule.weights.sum() - 1.0) < 1e-14);
    double m2 = 0.0, m4 = 0.0, m6 = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        const double x = rule.nodes(i);
        m2 += rule.weights(i) * x * x;
        m4 += rule.weights(i) * std::pow(x, 4);
        m6 += rule.weights(i) * std::pow(x, 6);
    }
    CHECK(std::abs(m2 - 1.0) < 1e-13);
    CHECK(std::abs(m4 - 3.0) < 1e-12);
    CHECK(std::abs(m6 - 15.0) < 1e-11);
}
