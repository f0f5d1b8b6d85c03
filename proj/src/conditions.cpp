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

#include "gpreg/conditions.hpp"

#include <cstdio>
#include <functional>

#include "gpreg/errors.hpp"
#include "gpreg/quadrature.hpp"

namespace gpreg {

namespace {

using Fn = std::function<double(double)>;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double piece_integral(const Fn& f, double a, double b, double p) {
    QuadOptions opt;
    opt.abs_tol = 0.0;
    opt.rel_tol = 1e-10;
    opt.max_intervals = 200;
    auto g = [&](double x) { return std::pow(std::abs(f(x)), p); };
    return integrate(g, a, b, opt).value;
}

// ||f||_p over R for even f, split into dyadic shells toward 0 and toward infinity
NormCheck closed_form_lp(const Fn& f, double p, double s) {
    NormCheck out;
    auto near = dyadic_series(
        [&](int j) { return piece_integral(f, s * std::ldexp(1.0, -j - 1), s * std::ldexp(1.0, -j), p); }, true);
    auto far = dyadic_series(
        [&](int j) { return piece_integral(f, s * std::ldexp(1.0, j), s * std::ldexp(1.0, j + 1), p); }, false);
    out.finite = near.finite && far.finite;
    out.method = "dyadic quadrature; near 0: " + near.model + "; tail: " + far.model;
    if (!out.finite) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    const double total = 2.0 * (near.value + far.value);
    out.value = std::pow(total, 1.0 / p);
    out.error = out.value / p * (2.0 * (near.remainder + far.remainder) + 1e-10 * total) / total;
    return out;
}

NormCheck closed_form_sup(const Fn& f, double s) {
    NormCheck out;
    double sup = 0.0;
    for (int j = -12; j <= 8; ++j) {
        const double a = s * std::ldexp(1.0, j);
        for (int i = 0; i < 16; ++i) {
            const double v = std::abs(f(a * (1.0 + i / 16.0)));
            if (!std::isfinite(v)) {
                out.value = std::numeric_limits<double>::infinity();
                out.method = "non-finite value at x = " + fmt(a);
                return out;
            }
            sup = std::max(sup, v);
        }
    }
    // the limit at 0 exists when the increments between dyadic samples are summable
    double last = std::abs(f(s));
    auto inc = dyadic_series(
        [&](int j) {
            const double v = std::abs(f(s * std::ldexp(1.0, -j - 1)));
            const double d = std::abs(v - last);
            last = v;
            sup = std::max(sup, v);
            return std::isfinite(v) ? d : std::numeric_limits<double>::infinity();
        },
        true);
    out.finite = inc.finite;
    if (!inc.finite) {
        out.value = std::numeric_limits<double>::infinity();
        out.method = "unbounded at 0: " + inc.model;
        return out;
    }
    out.value = std::max(sup, last + inc.remainder);
    out.error = inc.remainder;
    out.method = "dyadic sampling; limit at 0 by increment ratio test";
    return out;
}

NormCheck grid_lp(const SampledGrid& g, const std::vector<double>& y, double p, double s) {
    NormCheck out;
    const int i0 = g.n / 2;
    auto sum_range = [&](double a, double b) {
        double acc = 0.0;
        for (int i = i0; i < g.n; ++i) {
            const double x = g.x[i];
            if (x < a) continue;
            if (x >= b) break;
            acc += (i == i0 ? 0.5 : 1.0) * std::pow(std::abs(y[i]), p) * g.dx;
        }
        return acc;
    };
    const double core = sum_range(0.0, s);
    int shells = 0;
    while (s * std::ldexp(1.0, shells + 1) <= g.extent) ++shells;
    DyadicOptions opt;
    opt.max_pieces = shells;
    opt.negligible = 1e-12;
    auto far = dyadic_series(
        [&](int j) { return sum_range(s * std::ldexp(1.0, j), s * std::ldexp(1.0, j + 1)); }, false, opt);
    out.finite = far.finite;
    out.method = "grid sum; tail: " + far.model;
    if (!out.finite) {
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }
    const double total = 2.0 * (core + far.value);
    out.value = std::pow(total, 1.0 / p);
    out.error = out.value / p * (2.0 * far.remainder) / total + g.truncation_error;
    return out;
}

// Spectral moment int |lambda|^q F'(lambda)^e over dyadic shells, restricted to the resolved band.
DyadicSeries spectral_probe(const Kernel& kernel, const SampledGrid& g, double q, double e) {
    const double f0 = g.fprime[0];
    int jhi = int(g.fprime.size()) / 4;
    while (jhi > 1 && g.fprime[jhi] < 1e-13 * f0) --jhi;
    const double lam_hi = jhi * g.dlambda;
    const double lam0 = 1.0 / kernel.length_scale();
    int shells = 0;
    while (lam0 * std::ldexp(1.0, shells + 1) <= lam_hi) ++shells;
    DyadicOptions opt;
    opt.max_pieces = std::max(shells, 1);
    opt.negligible = 1e-12;
    auto res = dyadic_series(
        [&](int j) {
            const double a = lam0 * std::ldexp(1.0, j), b = 2.0 * a;
            return piece_integral([&](double l) { return std::pow(l, q) * std::pow(spectral_density(kernel, l), e); },
                                  a, b, 1.0);
        },
        false, opt);
    if (!res.finite && res.model.rfind("inconclusive", 0) == 0 && jhi < int(g.fprime.size()) / 4) {
        // the density fell below the resolution floor while still decaying
        res.finite = true;
        res.model = "decays below 1e-13 F'(0) at lambda = " + fmt(lam_hi);
    }
    return res;
}

}  // namespace

A1Report check_a1(const Kernel& kernel, std::vector<std::string>* notes) {
    A1Report rep;
    auto note = [&](const std::string& s) {
        if (notes) notes->push_back(s);
    };
    if (!has_b_representation(kernel)) {
        rep.representation = "none";
        const std::string why = kernel.name() + ": no moving-average kernel b (square root of F' not available)";
        for (NormCheck* c : {&rep.b_in_L1, &rep.b_in_L2, &rep.b_in_Linf, &rep.bprime_in_L1, &rep.bprime_in_L2,
                             &rep.bprime_in_Linf}) {
            c->finite = false;
            c->value = std::numeric_limits<double>::quiet_NaN();
            c->method = why;
        }
        note(why);
        return rep;
    }
    const auto brep = b_representation(kernel);
    rep.representation = brep.description;
    const double s = kernel.length_scale();
    Fn b = [&](double x) { return b_kernel(kernel, x); };
    Fn db = [&](double x) { return b_kernel_derivative(kernel, x); };
    if (brep.representation == BKernel::Representation::ClosedForm) {
        rep.b_in_L1 = closed_form_lp(b, 1.0, s);
        rep.b_in_L2 = closed_form_lp(b, 2.0, s);
        rep.b_in_Linf = closed_form_sup(b, s);
        rep.bprime_in_L1 = closed_form_lp(db, 1.0, s);
        rep.bprime_in_L2 = closed_form_lp(db, 2.0, s);
        rep.bprime_in_Linf = closed_form_sup(db, s);
    } else {
        const auto& g = *brep.grid;
        const double gs = s / 16.0;
        rep.b_in_L1 = grid_lp(g, g.b, 1.0, gs);
        rep.b_in_L2 = grid_lp(g, g.b, 2.0, gs);
        rep.bprime_in_L1 = grid_lp(g, g.bprime, 1.0, gs);
        rep.bprime_in_L2 = grid_lp(g, g.bprime, 2.0, gs);
        auto grid_sup = [&](const std::vector<double>& y) {
            NormCheck c;
            c.finite = true;
            for (double v : y) c.value = std::max(c.value, std::abs(v));
            c.method = "grid maximum";
            return c;
        };
        rep.b_in_Linf = grid_sup(g.b);
        rep.bprime_in_Linf = grid_sup(g.bprime);
        // the grid cannot show singularities at 0; spectral moments decide them
        struct Probe {
            NormCheck* target;
            double q, e;
            const char* what;
        };
        const Probe probes[] = {{&rep.b_in_Linf, 0.0, 0.5, "int F'^(1/2)"},
                                {&rep.bprime_in_Linf, 1.0, 0.5, "int |lambda| F'^(1/2)"},
                                {&rep.bprime_in_L2, 2.0, 1.0, "int lambda^2 F'"}};
        for (const auto& p : probes) {
            auto res = spectral_probe(kernel, g, p.q, p.e);
            p.target->method += "; spectral probe " + std::string(p.what) + ": " + res.model;
            if (!res.finite) {
                p.target->finite = false;
                p.target->value = std::numeric_limits<double>::infinity();
            }
        }
        if (g.truncation_error > 1e-8)
            note("b grid truncation F'(lambda_max)/F'(0) = " + fmt(g.truncation_error) + " exceeds 1e-8");
        if (g.fprime_clipped_mass > 0.0) note("b grid: clipped negative F' mass " + fmt(g.fprime_clipped_mass));
    }
    rep.b_L2_positive = rep.b_in_L2.finite && rep.b_in_L2.value > 0.0;
    rep.holds = rep.b_in_L1.finite && rep.b_in_L2.finite && rep.b_in_Linf.finite && rep.bprime_in_L1.finite &&
                rep.bprime_in_L2.finite && rep.bprime_in_Linf.finite && rep.b_L2_positive;
    note("A1(i) differentiability a.e. is structural: b is smooth away from 0 for every catalog family");
    return rep;
}

A2Report check_a2(const Kernel& kernel, std::vector<std::string>* notes) {
    auto note = [&](const std::string& s) {
        if (notes) notes->push_back(s);
    };
    A2Report rep;
    const auto d = r_derivatives_at_zero(kernel);
    rep.r2 = d.r2;
    rep.r4 = d.r4;
    rep.r2_available = d.r2_available;
    rep.r4_available = d.r4_available;
    if (!d.r2_available) note("A2: " + d.r2_reason);
    if (!d.r4_available) note("A2: " + d.r4_reason);
    if (d.r2_available && d.r4_available) {
        rep.discriminant = d.discriminant;
        rep.holds = d.discriminant > 0.0;
        const auto printed = printed_derivatives(kernel);
        if (printed.discriminant) {
            const double pd = *printed.discriminant;
            const double scale = std::max(std::abs(pd), std::abs(d.discriminant));
            if (std::abs(pd - d.discriminant) > 1e-9 * std::max(scale, 1.0))
                note("A2: reference closed-form discriminant " + fmt(pd) + " disagrees with the derivative value " +
                     fmt(d.discriminant) + "; derivative value adopted");
        }
    } else {
        rep.discriminant = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

double default_geman_delta(const Kernel& kernel) { return std::min(1.0, kernel.length_scale()); }

GemanReport check_geman(const Kernel& kernel, double delta) {
    if (!(delta > 0.0)) throw DomainError("check_geman: delta must be positive");
    const double r2 = r_derivative_at_zero(kernel, 2);
    GemanReport rep;
    rep.delta = delta;
    Fn L = [&](double t) { return (r_derivative(kernel, 2, t) - r2) / t; };
    double total = 0.0;
    int quiet = 0;
    double prev = -1.0;
    for (int j = 0; j < 60; ++j) {
        const double c = piece_integral(L, delta * std::ldexp(1.0, -j - 1), delta * std::ldexp(1.0, -j), 1.0);
        total += c;
        rep.refinements = j + 1;
        rep.last_increment = c;
        if (!std::isfinite(c)) break;
        quiet = (c < 1e-6 && (prev < 0.0 || c <= prev)) ? quiet + 1 : 0;
        prev = c;
        if (quiet >= 3) {
            rep.integral = total;
            rep.holds = true;
            return rep;
        }
    }
    rep.integral = std::isfinite(total) ? std::optional<double>(total) : std::nullopt;
    rep.holds = false;
    return rep;
}

ConditionReport check_conditions(const Kernel& kernel, std::optional<double> delta) {
    ConditionReport rep;
    rep.kernel = kernel.name();
    try {
        rep.a1 = check_a1(kernel, &rep.notes);
    } catch (const NoBRepresentation& e) {
        rep.notes.push_back(std::string("A1: ") + e.what());
    }
    rep.a2 = check_a2(kernel, &rep.notes);
    const double d = delta.value_or(default_geman_delta(kernel));
    rep.geman.delta = d;
    try {
        rep.geman = check_geman(kernel, d);
        rep.notes.push_back("G: dyadic refinement toward 0, Cauchy threshold 1e-6 on successive shells");
    } catch (const NotDifferentiable& e) {
        rep.notes.push_back(std::string("G: ") + e.what());
    }
    return rep;
}

}  // namespace gpreg
