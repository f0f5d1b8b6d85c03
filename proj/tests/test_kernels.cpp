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
#include "gpreg/errors.hpp"
#include "gpreg/kernels.hpp"
#include "gpreg/quadrature.hpp"

using namespace gpreg;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const char* const kCatalog[] = {
    "sqexp:ell=1",         "sqexp:ell=0.5",       "matern12:ell=1",        "matern32:ell=1",
    "matern52:ell=1",      "matern:nu=2.5,ell=1", "matern:nu=1.3,ell=1",   "matern:nu=3.7,ell=1.5",
    "matern-half:m=3,ell=2", "gammaexp:gamma=1.5,ell=1", "gammaexp:gamma=2,ell=1", "rq:alpha=2,ell=1",
    "rq:alpha=0.5,ell=1.5", "wendland:k=1",        "wendland:k=2",          "wendland:k=4",
    "cosine:ell=1",        "periodic:T=2,ell=1",
};

}  // namespace

TEST_CASE("kernel strings parse and round-trip") {
    for (const char* s : kCatalog) {
        const auto spec = parse_kernel_spec(s);
        CHECK(to_string(parse_kernel_spec(to_string(spec))) == to_string(spec));
    }
    CHECK(parse_kernel_spec("matern32").family == Family::MaternHalfInteger);
    CHECK(parse_kernel_spec("matern32").m == 1);
    CHECK(parse_kernel_spec("periodic:period=3").period == 3.0);
    for (const char* bad : {"", "nosuch", "sqexp:ell", "sqexp:ell=", "sqexp:ell=-1", "sqexp:nu=2", "matern:ell=1",
                            "sqexp:ell=1,ell=2", "gammaexp:gamma=2.5", "wendland:k=1.5", "rq:alpha=0", "sqexp:ell=abc"})
        CHECK_THROWS_AS(parse_kernel_spec(bad), ParseError);
}

// mpmath references
TEST_CASE("r and its derivatives at t = 0.7") {
    struct Ref {
        const char* kernel;
        double r, r1, r2;
    };
    const Ref refs[] = {
        {"sqexp:ell=1", 0.61262639418441606899, -0.85767695185818249658, -0.02450505576737664276},
        {"matern:nu=1.3,ell=1", 0.64106756382175597508, -0.61824204643303650874, 0.25365098837533922953},
        {"matern52:ell=1", 0.70694268190409770821, -0.62560136591591268284, -0.040151538570441075154},
        {"matern:nu=3.7,ell=1.5", 0.8661334667759116653, -0.34385173527128454383, -0.29517055873477778091},
        {"rq:alpha=2,ell=1", 0.7936468569104319919, -0.49492454328490191032, -0.2440766917249754887},
        {"gammaexp:gamma=1.5,ell=1", 0.55673716943811728308, -0.69869960243190198045, 0.37778989727081902053},
        {"periodic:T=2,ell=1", 0.45208158115903550231, -0.57450569064383251512, 2.0413919849370793537},
        {"cosine:ell=1", -0.58778525229247312917, -2.5416018461576299079, 5.8012079129212118131},
    };
    for (const auto& ref : refs) {
        CAPTURE(ref.kernel);
        const Kernel k = Kernel::parse(ref.kernel);
        CHECK(rel(r_eval(k, 0.7), ref.r) < 1e-13);
        CHECK(rel(r_derivative(k, 1, 0.7), ref.r1) < 1e-12);
        CHECK(rel(r_derivative(k, 2, 0.7), ref.r2) < 1e-11);
        CHECK(r_eval(k, -0.7) == r_eval(k, 0.7));
        CHECK(r_derivative(k, 1, -0.7) == -r_derivative(k, 1, 0.7));
    }
    CHECK(r_eval(Kernel::parse("sqexp:ell=1"), 0.0) == 1.0);
    CHECK(std::abs(r_eval(Kernel::parse("cosine:ell=1"), 1.0) + 1.0) < 1e-15);
}

TEST_CASE("Matern nu = 3/2 matches the half-integer closed form") {
    const Kernel generic = Kernel::parse("matern:nu=1.5,ell=1");
    for (int i = 0; i <= 100; ++i) {
        const double t = 5.0 * i / 100.0;
        const double z = std::sqrt(3.0 * t * t);
        CHECK(std::abs(r_eval(generic, t) - (1.0 + z) * std::exp(-z)) < 1e-12);
    }
}

TEST_CASE("derivatives at zero") {
    const auto se = r_derivatives_at_zero(Kernel::parse("sqexp:ell=1"));
    CHECK(se.r2 == -2.0);
    CHECK(se.r4 == 12.0);
    CHECK(se.discriminant == 8.0);
    for (double alpha : {0.5, 2.0, 7.0}) {
        for (double ell : {0.5, 1.0, 2.0}) {
            const auto d = r_derivatives_at_zero(Kernel::parse("rq:alpha=" + Gen::num(alpha) + ",ell=" + Gen::num(ell)));
            CHECK(rel(d.r2, -1.0 / (ell * ell)) < 1e-14);
            CHECK(rel(d.r4, 3.0 * (1.0 + 1.0 / alpha) / std::pow(ell, 4)) < 1e-14);
        }
    }
    const auto m = r_derivatives_at_zero(Kernel::parse("matern:nu=3.7,ell=1.5"));
    CHECK(rel(m.r2, -0.60905349794238683128) < 1e-13);
    CHECK(rel(m.r4, 1.7674493665779068829) < 1e-13);
    CHECK(r_derivatives_at_zero(Kernel::parse("cosine:ell=1")).discriminant == 0.0);
    CHECK(rel(r_derivatives_at_zero(Kernel::parse("periodic:T=2,ell=1")).r4, 121.76136379250304655) < 1e-13);
    // Wendland k = 4 discriminant, exact rational value
    CHECK(rel(r_derivatives_at_zero(Kernel::parse("wendland:k=4")).discriminant, 47736.0 / 49.0) < 1e-13);

    CHECK_THROWS_AS(r_derivative_at_zero(Kernel::parse("matern12:ell=1"), 2), NotDifferentiable);
    CHECK_THROWS_AS(r_derivative_at_zero(Kernel::parse("matern32:ell=1"), 4), NotDifferentiable);
    CHECK_THROWS_AS(r_derivative_at_zero(Kernel::parse("gammaexp:gamma=1.5,ell=1"), 2), NotDifferentiable);
    CHECK_FALSE(r_derivatives_at_zero(Kernel::parse("matern:nu=0.8,ell=1")).r2_available);
}

TEST_CASE("analytic derivatives at zero agree with finite differences") {
    for (const char* s : kCatalog) {
        CAPTURE(s);
        const Kernel k = Kernel::parse(s);
        const auto d = r_derivatives_at_zero(k);
        if (d.r2_available) CHECK(rel(fd_derivative_at_zero(k, 2).value, d.r2) < 1e-6);
        if (d.r4_available) CHECK(rel(fd_derivative_at_zero(k, 4).value, d.r4) < 1e-6);
        if (d.r2_available) CHECK(d.r2 < 0.0);
    }
    Gen g(31);
    for (int i = 0; i < 40; ++i) {
        const auto s = g.smooth_kernel();
        CAPTURE(s);
        const Kernel k = Kernel::parse(s);
        const auto d = r_derivatives_at_zero(k);
        REQUIRE(d.r4_available);
        CHECK(rel(fd_derivative_at_zero(k, 2).value, d.r2) < 1e-6);
        CHECK(rel(fd_derivative_at_zero(k, 4).value, d.r4) < 1e-6);
        CHECK(d.discriminant == d.r4 - d.r2 * d.r2);
    }
}

TEST_CASE("printed closed forms that disagree with the derivatives are exposed") {
    const Kernel m = Kernel::parse("matern:nu=2.5,ell=1");
    const auto pm = printed_derivatives(m);
    REQUIRE(pm.discriminant.has_value());
    CHECK(rel(*pm.discriminant, 4.0 / 3.0) < 1e-14);
    CHECK(rel(r_derivatives_at_zero(m).discriminant, 200.0 / 9.0) < 1e-13);
    const auto pr = printed_derivatives(Kernel::parse("rq:alpha=2,ell=1"));
    REQUIRE(pr.discriminant.has_value());
    CHECK(rel(*pr.discriminant, 7.0) < 1e-14);
    CHECK(rel(r_derivatives_at_zero(Kernel::parse("rq:alpha=2,ell=1")).discriminant, 3.5) < 1e-14);
}

TEST_CASE("covariance invariants on random kernels") {
    Gen g(32);
    for (int i = 0; i < 60; ++i) {
        const auto s = g.smooth_kernel();
        CAPTURE(s);
        const Kernel k = Kernel::parse(s);
        CHECK(r_eval(k, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
        for (int j = 0; j < 20; ++j) {
            const double t = g.uniform(1e-3, 6.0);
            CHECK(r_eval(k, t) == r_eval(k, -t));
            if (k.family() != Family::Periodic) CHECK(r_eval(k, t) < 1.0);
            CHECK(std::abs(r_eval(k, t)) <= 1.0);
        }
    }
}

TEST_CASE("spectral densities") {
    CHECK(rel(spectral_density(Kernel::parse("matern12:ell=1"), 0.0), 1.0 / std::numbers::pi) < 1e-14);
    CHECK(rel(spectral_density(Kernel::parse("sqexp:ell=2"), 0.0), 1.0 / std::sqrt(std::numbers::pi)) < 1e-14);
    CHECK(rel(spectral_density(Kernel::parse("sqexp:ell=1"), 0.8), 0.24038532470982694696) < 1e-14);
    CHECK(rel(spectral_density(Kernel::parse("matern:nu=1.3,ell=1"), 0.8), 0.24435306265879462007) < 1e-13);
    CHECK(rel(spectral_density(Kernel::parse("matern52:ell=1"), 0.8), 0.26448835680795750171) < 1e-13);
    CHECK_FALSE(has_spectral_density(Kernel::parse("cosine:ell=1")));
    CHECK_THROWS_AS(spectral_density(Kernel::parse("periodic:T=2,ell=1"), 0.1), NoSpectralDensity);
    for (const char* s : {"matern:nu=2.5,ell=1", "sqexp:ell=0.7", "rq:alpha=2,ell=1", "matern32:ell=1.3"}) {
        const Kernel k = Kernel::parse(s);
        QuadOptions q;
        q.abs_tol = 1e-13;
        q.rel_tol = 1e-12;
        const double mass = 2.0 * integrate_to_infinity([&](double l) { return spectral_density(k, l); }, 0.0, q).value;
        CHECK(std::abs(mass - 1.0) < 1e-8);
        const double r1 =
            2.0 * integrate_to_infinity([&](double l) { return std::cos(0.5 * l) * spectral_density(k, l); }, 0.0, q).value;
        CHECK(std::abs(r1 - r_eval(k, 0.5)) < 1e-7);
    }
}

TEST_CASE("moving-average kernel b") {
    struct Ref {
        const char* kernel;
        double b, bp;
    };
    const Ref refs[] = {
        {"sqexp:ell=1", 0.88726739583638892372, -1.0647208750036667085},
        {"matern:nu=1.3,ell=1", 0.76622773609183044399, -1.395601779137222823},
        {"matern52:ell=1", 0.82302126871852074027, -1.1411968725675635826},
        {"matern:nu=3.7,ell=1.5", 0.75483522771546865032, -0.44169313228070915957},
    };
    for (const auto& ref : refs) {
        CAPTURE(ref.kernel);
        const Kernel k = Kernel::parse(ref.kernel);
        CHECK(rel(b_kernel(k, 0.3), ref.b) < 1e-12);
        CHECK(rel(b_kernel_derivative(k, 0.3), ref.bp) < 1e-11);
        CHECK(b_kernel(k, -0.3) == b_kernel(k, 0.3));
    }
    // squared exponential shape exp(-2 x^2 / ell^2)
    const Kernel se = Kernel::parse("sqexp:ell=1.5");
    CHECK(rel(b_kernel(se, 0.9) / b_kernel(se, 0.0), std::exp(-2.0 * 0.81 / 2.25)) < 1e-14);
    const Kernel m12 = Kernel::parse("matern12:ell=2");
    CHECK(rel(b_kernel(m12, 0.7) / b_kernel(m12, 1.9), std::cyl_bessel_k(0.0, 0.35) / std::cyl_bessel_k(0.0, 0.95)) < 1e-12);

    for (const char* s : {"sqexp:ell=1", "matern12:ell=1", "matern32:ell=1", "matern52:ell=1", "matern:nu=1.3,ell=1",
                          "rq:alpha=2,ell=1", "wendland:k=2", "gammaexp:gamma=1.5,ell=1"}) {
        CAPTURE(s);
        const Kernel k = Kernel::parse(s);
        REQUIRE(has_b_representation(k));
        CHECK(std::abs(reconstruct_r(k, 0.0) - 1.0) < 1e-6);
    }
    CHECK_FALSE(has_b_representation(Kernel::parse("cosine:ell=1")));
    CHECK_THROWS_AS(b_kernel(Kernel::parse("periodic:T=2,ell=1"), 0.1), NoBRepresentation);
}

TEST_CASE("reconstruction identity") {
    const Kernel se = Kernel::parse("sqexp:ell=1");
    CHECK(std::abs(reconstruct_r(se, 1.0) - std::exp(-1.0)) < 1e-5);
    const Kernel m52 = Kernel::parse("matern52:ell=1");
    CHECK(std::abs(reconstruct_r(m52, 0.5) - r_eval(m52, 0.5)) < 1e-4);
    for (const char* s : {"sqexp:ell=1", "matern32:ell=1", "matern52:ell=1", "matern:nu=2.5,ell=1", "rq:alpha=2,ell=1"}) {
        CAPTURE(s);
        const Kernel k = Kernel::parse(s);
        for (int i = 0; i <= 30; ++i) {
            const double t = 3.0 * k.length_scale() * i / 30.0;
            CHECK(std::abs(reconstruct_r(k, t) - r_eval(k, t)) < 1e-5);
        }
    }
}

TEST_CASE("Wendland moments by exact arithmetic and by the Beta formula") {
    for (int k = 1; k <= 5; ++k)
        for (int n = 1; n <= 6; ++n) CHECK(rel(wendland_moment_beta(k, n), wendland_moment_exact(k, n)) < 1e-12);
}
