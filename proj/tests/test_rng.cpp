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
#include <vector>

#include "doctest.h"
#include "generators.hpp"
#include "gpreg/rng.hpp"
#include "gpreg/specfun.hpp"

using namespace gpreg;

TEST_CASE("Philox4x32-10 known answers") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, K{0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, K{0xa4093822u, 0x299f31d0u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("uniforms stay inside the open interval") {
    CHECK(uniform_open(0, 0) > 0.0);
    CHECK(uniform_open(0xffffffffu, 0xffffffffu) < 1.0);
    Gen g(81);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform_open(std::uint32_t(g.integer(0, 1 << 30)) * 4u, std::uint32_t(g.integer(0, 1 << 30)));
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("normal quantile") {
    CHECK(normal_quantile(0.5) == 0.0);
    CHECK(std::abs(normal_quantile(0.975) - 1.959963984540054) < 1e-15);
    CHECK(std::abs(normal_quantile(1e-10) + 6.3613409024040562) < 1e-13);
    Gen g(82);
    for (int i = 0; i < 500; ++i) {
        const double p = g.log_uniform(1e-15, 0.5);
        if (p > 1e-3) CHECK(std::abs(normal_quantile(p) + normal_quantile(1.0 - p)) < 1e-12);
        const double x = normal_quantile(p);
        CHECK(std::abs(normal_cdf(x) - p) < 1e-13 * p);
    }
}

TEST_CASE("normal pairs") {
    const auto a = normal_pair(7, 3, 11);
    CHECK(a == normal_pair(7, 3, 11));
    CHECK(a != normal_pair(7, 3, 12));
    CHECK(a != normal_pair(8, 3, 11));
    CHECK(a != normal_pair(7, 4, 11));
    CHECK(a != normal_pair(7, 3, 11, 1));
    std::vector<double> batch(2 * 50);
    normal_pairs(7, 3, 0xffffffe0u, 50, 1, batch.data());
    for (int i = 0; i < 50; ++i) {
        const auto p = normal_pair(7, 3, 0xffffffe0u + std::uint32_t(i), 1);
        CHECK(batch[2 * i] == p.first);
        CHECK(batch[2 * i + 1] == p.second);
    }
}

TEST_CASE("normal moments") {
    const int n = 200000;
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto [x, y] = normal_pair(2026, 0, std::uint32_t(i));
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
        cross += x * y;
    }
    const double se = 1.0 / std::sqrt(double(n));
    CHECK(std::abs(s1 / n) < 5.0 * se);
    CHECK(std::abs(s2 / n - 1.0) < 5.0 * std::sqrt(2.0) * se);
    CHECK(std::abs(s3 / n) < 5.0 * std::sqrt(15.0) * se);
    CHECK(std::abs(s4 / n - 3.0) < 5.0 * std::sqrt(96.0) * se);
    CHECK(std::abs(cross / n) < 5.0 * se);
}
