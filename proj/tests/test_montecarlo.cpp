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
#include <sstream>
#include <vector>

#include "doctest.h"
#include "gpreg/errors.hpp"
#include "gpreg/montecarlo.hpp"

using namespace gpreg;

namespace {

const Kernel& se() {
    static const Kernel k = Kernel::parse("sqexp:ell=1");
    return k;
}

}  // namespace

TEST_CASE("level crossings") {
    CHECK(count_crossings(std::vector<double>(50, 0.3), 0.0) == 0);
    std::vector<double> s(1001);
    for (int i = 0; i < 1001; ++i) s[i] = std::sin(6.0 * std::numbers::pi * i / 1000.0 + 0.3);
    CHECK(count_crossings(s, 0.0) == 6);
    CHECK(count_crossings(std::vector<double>{1, 0, 1}, 0.0) == 0);
    CHECK(count_crossings(std::vector<double>{1, 0, -1}, 0.0) == 1);
    CHECK(count_crossings(std::vector<double>{0, 0, 1, -1}, 0.0) == 1);
    CHECK(count_crossings(std::vector<double>{0, 0, 0}, 0.0) == 0);
    CHECK(count_crossings(std::vector<double>{2, 1, 2, 1}, 1.5) == 3);
    CHECK(count_crossings(std::vector<double>{}, 0.0) == 0);
}

TEST_CASE("pairwise summation") {
    std::vector<double> v(1000, 0.1);
    CHECK(std::abs(pairwise_sum(v) - 100.0) < 1e-12);
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{2.5}) == 2.5);
    std::vector<double> w = {1e16, 1.0, -1e16, 1.0};
    CHECK(pairwise_sum(w) == pairwise_sum(w));
}

TEST_CASE("embedding diagnostics") {
    const CirculantEmbedding e(se(), 257);
    const auto& info = e.info();
    CHECK(info.grid_points == 257);
    CHECK(info.size >= 512);
    CHECK((info.size & (info.size - 1)) == 0);
    CHECK(info.tail_r <= 1e-5);
    CHECK(info.min_eigen_ratio >= -1e-8);
    CHECK(e.grid_step() == doctest::Approx(1.0 / 256.0));
    CHECK_FALSE(info.tapered);

    MonteCarloOptions small;
    small.max_size_log2 = 9;
    small.tail_tol = 1e-30;
    CHECK_THROWS_AS(CirculantEmbedding(Kernel::parse("sqexp:ell=3"), 257, small), EmbeddingFailure);
    CHECK_THROWS_AS(CirculantEmbedding(Kernel::parse("matern12:ell=1"), 257), NotDifferentiable);
    CHECK_THROWS_AS(CirculantEmbedding(se(), 1), DomainError);
}

TEST_CASE("paths are determined by seed and index") {
    MonteCarloOptions one, three;
    one.workers = 1;
    three.workers = 3;
    const auto a = sample_paths(se(), 129, 9, 42, one);
    const auto b = sample_paths(se(), 129, 9, 42, three);
    REQUIRE(a.size() == 9);
    for (int i = 0; i < 9; ++i) {
        CHECK(a[i].path_index == i);
        CHECK(a[i].x == b[i].x);
        CHECK(a[i].xdot == b[i].xdot);
        CHECK(a[i].x.size() == 129);
    }
    const auto c = sample_paths(se(), 129, 9, 43, one);
    CHECK(c[0].x != a[0].x);
    const CirculantEmbedding e(se(), 129);
    CHECK(e.sample(42, 5).x == a[5].x);
}

TEST_CASE("path covariances") {
    const int n = 4000;
    const int grid = 129;
    const auto paths = sample_paths(se(), grid, n, 7);
    const double sigma2 = 2.0;
    for (int lag : {0, 16, 64, 128}) {
        double sxx = 0.0, sdd = 0.0, sxd = 0.0;
        for (const auto& p : paths) {
            sxx += p.x[0] * p.x[lag];
            sdd += p.xdot[0] * p.xdot[lag];
            sxd += p.x[lag] * p.xdot[lag];
        }
        const double tau = double(lag) / (grid - 1);
        const double r = std::exp(-tau * tau);
        const double rdd = (2.0 - 4.0 * tau * tau) * r;  // -r''(tau)
        CHECK(std::abs(sxx / n - r) < 4.0 * std::sqrt((1.0 + r * r) / n));
        CHECK(std::abs(sdd / n - rdd) < 4.0 * sigma2 * std::sqrt((1.0 + (rdd / sigma2) * (rdd / sigma2)) / n));
        CHECK(std::abs(sxd / n) < 4.0 * std::sqrt(sigma2 / n));
    }
}

TEST_CASE("Monte Carlo second moment of an integrated functional") {
    const auto m = mc_integrated_functional(parse_functional("H:1"), se(), 4000, 257, 11);
    CHECK(m.n_paths == 4000);
    CHECK(std::abs(m.second_moment - 0.8615277068) < 4.0 * m.std_error);
    CHECK(std::abs(m.mean) < 4.0 * m.mean_std_error);
    const auto two = mc_integrated_functionals({parse_functional("H:1"), parse_functional("abs")}, se(), 4000, 257, 11);
    REQUIRE(two.size() == 2);
    CHECK(two[0].second_moment == m.second_moment);
    const auto h2 = mc_integrated_functional(parse_functional("H2:1,1"), se(), 4000, 257, 12);
    CHECK(std::abs(h2.second_moment - 0.43233235838169365) < 4.0 * h2.std_error);
}

TEST_CASE("crossing statistics") {
    const auto c = crossing_statistics(se(), 0.0, 2000, 513, 5);
    CHECK(c.rice_mean == doctest::Approx(std::sqrt(2.0) / std::numbers::pi).epsilon(1e-12));
    CHECK(std::abs(c.mean - c.rice_mean) < 4.0 * c.std_error);
    CHECK(c.second_moment >= c.mean * c.mean);
    const auto r = crossing_refinement(se(), 0.0, 500, 257, 2, 5);
    REQUIRE(r.size() == 2);
    CHECK(r[1].grid_points == 513);
    CHECK_THROWS_AS(crossing_statistics(se(), 0.0, 0, 257, 5), DomainError);
}

TEST_CASE("mean-square derivative residual") {
    CHECK(std::abs(ms_residual_analytic(se(), 0.01) / 2.999833339166516669e-4 - 1.0) < 1e-9);
    double prev = ms_residual_analytic(se(), 0.2);
    for (double h = 0.1; h > 1e-3; h /= 2.0) {
        const double g = ms_residual_analytic(se(), h);
        CHECK(g < prev);
        CHECK(std::abs(g / (3.0 * h * h) - 1.0) < 0.05);
        prev = g;
    }
    const auto mc = ms_derivative_residual(se(), 0.05, 1000, 3);
    CHECK(std::abs(mc.mc_mean - mc.analytic) < 4.0 * mc.mc_std_error);
    CHECK_THROWS_AS(ms_derivative_residual(se(), 0.0), DomainError);
    CHECK_THROWS_AS(ms_derivative_residual(se(), 2.0, 10), DomainError);
}

TEST_CASE("binary path files") {
    const auto paths = sample_paths(se(), 65, 3, 9);
    std::stringstream ss;
    write_paths_binary(ss, paths);
    const auto back = read_paths_binary(ss);
    REQUIRE(back.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(back[i].x == paths[i].x);
        CHECK(back[i].xdot == paths[i].xdot);
        CHECK(back[i].grid_step == paths[i].grid_step);
    }
    std::stringstream bad("XXXX0000");
    CHECK_THROWS_AS(read_paths_binary(bad), ParseError);
    std::string s = ss.str();
    std::stringstream cut(s.substr(0, s.size() - 8));
    CHECK_THROWS_AS(read_paths_binary(cut), ParseError);
}
