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

#include "gpreg/verify.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <utility>

#include "gpreg/errors.hpp"
#include "gpreg/specfun.hpp"

namespace gpreg {

namespace {

using Clock = std::chrono::steady_clock;

Check make_check(std::string name, double value, double target, double tolerance, std::string relation, bool ok) {
    Check c;
    c.name = std::move(name);
    c.value = value;
    c.target = target;
    c.tolerance = tolerance;
    c.relation = std::move(relation);
    c.passed = ok;
    return c;
}

Check abs_check(std::string name, double value, double target, double tol) {
    return make_check(std::move(name), value, target, tol, "|value - target| <= tolerance",
                      std::abs(value - target) <= tol);
}

Check rel_check(std::string name, double value, double target, double tol) {
    return make_check(std::move(name), value, target, tol, "|value - target| <= tolerance * |target|",
                      std::abs(value - target) <= tol * std::abs(target));
}

Check se_check(std::string name, double value, double target, double se) {
    return make_check(std::move(name), value, target, 3.0 * se, "|value - target| <= 3 SE",
                      std::abs(value - target) <= 3.0 * se);
}

Check le_check(std::string name, double value, double bound) {
    return make_check(std::move(name), value, bound, 0.0, "value <= target", value <= bound);
}

Check lt_check(std::string name, double value, double bound) {
    return make_check(std::move(name), value, bound, 0.0, "value < target", value < bound);
}

Check gt_check(std::string name, double value, double bound) {
    return make_check(std::move(name), value, bound, 0.0, "value > target", value > bound);
}

Check flag_check(std::string name, bool value, bool expected) {
    return make_check(std::move(name), value ? 1.0 : 0.0, expected ? 1.0 : 0.0, 0.0, "value == target",
                      value == expected);
}

std::uint64_t criterion_seed(std::uint64_t seed, int id) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * std::uint64_t(id);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

MonteCarloOptions mc_options(const VerifyOptions& opt) {
    MonteCarloOptions m;
    m.workers = opt.workers;
    return m;
}

std::vector<Kernel> kernels_or(const VerifyOptions& opt, std::initializer_list<const char*> fixed) {
    std::vector<Kernel> out;
    if (opt.kernel) {
        out.push_back(Kernel::parse(*opt.kernel));
        return out;
    }
    for (const char* s : fixed) out.push_back(Kernel::parse(s));
    return out;
}

bool a2_holds(const Kernel& k) { return check_a2(k).holds; }

// ---- 1 ----
void criterion_hypergeometric(CriterionResult& out) {
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 0; n <= 50; ++n) {
        const double lhs = hyp2f1_terminating(-0.5, -n - 1, 0.5, 1.0);
        const double rhs = gauss_theorem_value(n);
        const double e = std::abs(lhs - rhs) / std::abs(rhs);
        if (e > worst) {
            worst = e;
            worst_n = n;
        }
    }
    out.checks.push_back(le_check("max relative error of 2F1(-1/2, -n-1; 1/2; 1), n <= 50", worst, 1e-11));
    out.data["worst_n"] = worst_n;
}

// ---- 2 ----
void criterion_iterated_integral(CriterionResult& out) {
    double worst = 0.0;
    for (int n = 0; n <= 30; ++n)
        worst = std::max(worst, std::abs(iter_integral_quadrature(1.0, 1.0, n) - iter_integral_closed_form(n)));
    out.checks.push_back(le_check("max |quadrature - closed form|, n <= 30", worst, 1e-10));
    out.checks.push_back(abs_check("quadrature n=0", iter_integral_quadrature(1.0, 1.0, 0), 0.5, 1e-12));
    out.checks.push_back(abs_check("closed form n=0", iter_integral_closed_form(0), 0.5, 1e-12));
    out.checks.push_back(abs_check("quadrature n=1", iter_integral_quadrature(1.0, 1.0, 1), 5.0 / 12.0, 1e-12));
    out.checks.push_back(abs_check("closed form n=1", iter_integral_closed_form(1), 5.0 / 12.0, 1e-12));
    const auto s = iter_integral_series(1.0, 1.0, 50, 400);
    out.checks.push_back(abs_check("fitted slope over [50, 400]", s.fitted_slope, -0.5, 0.05));
    out.data["fit"] = to_json(s, false);
}

// ---- 3 ----
struct Verdict {
    const char* kernel;
    int a1;  // -1 not asserted
    int a2;
};

constexpr Verdict kTable[] = {
    {"sqexp:ell=1", 1, 1},      {"matern12:ell=1", 0, 0},  {"matern32:ell=1", 1, 0},
    {"matern52:ell=1", 1, 1},   {"rq:alpha=2,ell=1", 1, 1}, {"wendland:k=4", -1, 1},
    {"cosine:ell=1", -1, 0},    {"periodic:T=2,ell=1", -1, 1},
};

void verdict_checks(CriterionResult& out, const Kernel& k, int a1, int a2) {
    Json row;
    row["kernel"] = k.name();
    if (a1 >= 0) {
        const bool h = check_a1(k).holds;
        out.checks.push_back(flag_check(k.name() + " (A1)", h, a1 == 1));
        row["a1"] = h;
    }
    if (a2 >= 0) {
        const auto r = check_a2(k);
        out.checks.push_back(flag_check(k.name() + " (A2)", r.holds, a2 == 1));
        row["a2"] = r.holds;
        row["discriminant"] = r.r2_available && r.r4_available ? Json(r.discriminant) : Json(nullptr);
    }
    out.data["verdicts"].push_back(row);
}

void criterion_conditions(CriterionResult& out, const VerifyOptions& opt) {
    out.data["verdicts"] = Json::array();
    if (opt.kernel) {
        const Kernel k = Kernel::parse(*opt.kernel);
        const auto rep = check_conditions(k);
        out.data["report"] = condition_report_json(rep, RunConfig{"conditions", k.name()});
        out.checks.push_back(flag_check("(A2) iff r'''' exists and discriminant > 0", rep.a2.holds,
                                        rep.a2.r4_available && rep.a2.discriminant > 0.0));
        if (rep.a2.holds) out.checks.push_back(flag_check("(A2) implies (G)", rep.geman.holds, true));
        for (const auto& v : kTable)
            if (Kernel::parse(v.kernel).name() == k.name()) verdict_checks(out, k, v.a1, v.a2);
        return;
    }
    for (const auto& v : kTable) verdict_checks(out, Kernel::parse(v.kernel), v.a1, v.a2);

    const Kernel generic = Kernel::parse("matern:nu=2.5,ell=1");
    const Kernel half = Kernel::parse("matern52:ell=1");
    const auto g = check_a2(generic), h = check_a2(half);
    out.checks.push_back(flag_check("matern nu=2.5 (A1) equals matern52", check_a1(generic).holds, check_a1(half).holds));
    out.checks.push_back(flag_check("matern nu=2.5 (A2) equals matern52", g.holds, h.holds));
    out.checks.push_back(rel_check("matern nu=2.5 r''(0) vs matern52", g.r2, h.r2, 1e-10));
    out.checks.push_back(rel_check("matern nu=2.5 r''''(0) vs matern52", g.r4, h.r4, 1e-10));
    out.checks.push_back(rel_check("matern nu=2.5 discriminant vs matern52", g.discriminant, h.discriminant, 1e-10));

    const auto c = check_a2(Kernel::parse("cosine:ell=1"));
    out.checks.push_back(abs_check("cosine discriminant", c.discriminant, 0.0, 1e-9));

    const double T = 2.0, ell = 1.0;
    const auto p = check_a2(Kernel::parse("periodic:T=2,ell=1"));
    const double pi4 = std::pow(std::numbers::pi, 4);
    out.checks.push_back(rel_check("periodic discriminant vs 8 pi^4 (ell^2 + 1) / (T ell)^4", p.discriminant,
                                   8.0 * pi4 * (ell * ell + 1.0) / std::pow(T * ell, 4), 1e-6));
}

// ---- 4 ----
void criterion_derivatives(CriterionResult& out, const VerifyOptions& opt) {
    const auto ks = kernels_or(opt, {"sqexp:ell=1", "sqexp:ell=0.5", "matern12:ell=1", "matern32:ell=1",
                                     "matern52:ell=1", "matern52:ell=2", "matern-half:m=3,ell=1",
                                     "matern:nu=2.5,ell=1", "matern:nu=3.7,ell=1.5", "matern:nu=1.3,ell=1",
                                     "gammaexp:gamma=2,ell=1", "rq:alpha=2,ell=1", "rq:alpha=0.5,ell=1",
                                     "wendland:k=1", "wendland:k=2", "wendland:k=3", "wendland:k=4",
                                     "cosine:ell=1", "periodic:T=2,ell=1"});
    out.data["flagged"] = Json::array();
    out.data["printed_agree"] = Json::array();
    int compared = 0;
    for (const auto& k : ks) {
        const auto d = r_derivatives_at_zero(k);
        std::optional<double> fd2, fd4;
        if (d.r2_available) {
            fd2 = fd_derivative_at_zero(k, 2).value;
            out.checks.push_back(rel_check(k.name() + " r''(0) vs finite differences", d.r2, *fd2, 1e-6));
            ++compared;
        }
        if (d.r4_available) {
            fd4 = fd_derivative_at_zero(k, 4).value;
            out.checks.push_back(rel_check(k.name() + " r''''(0) vs finite differences", d.r4, *fd4, 1e-6));
            ++compared;
        }
        const auto printed = printed_derivatives(k);
        auto compare = [&](const char* what, std::optional<double> pv, bool available, double adopted,
                           std::optional<double> fd) {
            if (!pv || !available) return;
            Json e;
            e["kernel"] = k.name();
            e["quantity"] = what;
            e["printed"] = *pv;
            e["adopted"] = adopted;
            e["finite_differences"] = fd ? Json(*fd) : Json(nullptr);
            if (std::abs(*pv - adopted) > 1e-6 * std::abs(adopted)) {
                out.data["flagged"].push_back(e);
            } else {
                out.data["printed_agree"].push_back(e);
            }
        };
        std::optional<double> fd_disc;
        if (fd2 && fd4) fd_disc = *fd4 - *fd2 * *fd2;
        compare("r2", printed.r2, d.r2_available, d.r2, fd2);
        compare("r4", printed.r4, d.r4_available, d.r4, fd4);
        compare("discriminant", printed.discriminant, d.r2_available && d.r4_available, d.discriminant, fd_disc);
        if (fd_disc && printed.discriminant)
            out.checks.push_back(abs_check(k.name() + " adopted discriminant vs finite differences (1e-6 |r4|)",
                                           d.discriminant, *fd_disc, 1e-6 * std::abs(d.r4)));
    }
    if (compared == 0) {
        out.skipped = true;
        out.skip_reason = "r''(0) does not exist";
        return;
    }
    if (!opt.kernel) {
        for (const char* name : {"matern:nu=2.5,ell=1", "rq:alpha=2,ell=1"}) {
            bool found = false;
            for (const auto& e : out.data["flagged"])
                if (e["kernel"] == Kernel::parse(name).name() && e["quantity"] == "discriminant") found = true;
            out.checks.push_back(flag_check(std::string(name) + " printed discriminant flagged", found, true));
        }
    }
}

// ---- 5 ----
void criterion_b_kernel(CriterionResult& out, const VerifyOptions& opt) {
    const auto ks =
        kernels_or(opt, {"sqexp:ell=1", "matern32:ell=1", "matern52:ell=1", "matern:nu=2.5,ell=1", "rq:alpha=2,ell=1"});
    out.data["max_errors"] = Json::array();
    for (const auto& k : ks) {
        if (!has_b_representation(k)) {
            out.skipped = true;
            out.skip_reason = k.name() + " has no moving-average representation";
            return;
        }
        const double span = 3.0 * k.length_scale();
        double worst = 0.0;
        for (int i = 0; i <= 60; ++i) {
            const double t = span * i / 60.0;
            worst = std::max(worst, std::abs(reconstruct_r(k, t) - r_eval(k, t)));
        }
        out.checks.push_back(le_check(k.name() + " max |int b(t+s) b(s) ds - r(t)| on [0, 3 ell]", worst, 1e-5));
        out.data["max_errors"].push_back({{"kernel", k.name()}, {"value", worst}});
    }
}

// ---- 6 ----
void criterion_chaos_mc(CriterionResult& out, const VerifyOptions& opt) {
    const auto ks = kernels_or(opt, {"sqexp:ell=1", "matern52:ell=1"});
    const std::vector<Functional> fs = {Functional::hermite(1), Functional::hermite(2), Functional::hermite(3),
                                        Functional::hermite(4), Functional::hermite2d(1, 1)};
    out.data["estimates"] = Json::array();
    for (const auto& k : ks) {
        if (!a2_holds(k)) {
            out.skipped = true;
            out.skip_reason = k.name() + ": condition (A2) fails";
            return;
        }
        const auto mc = mc_integrated_functionals(fs, k, opt.paths, opt.grid, criterion_seed(opt.seed, 6), mc_options(opt));
        for (size_t i = 0; i < fs.size(); ++i) {
            const int n_max = fs[i].two_dimensional() ? fs[i].a + fs[i].b : fs[i].m;
            double analytic = 0.0;
            for (double v : integrated_chaos_norms(fs[i], k, n_max)) analytic += v;
            out.checks.push_back(
                se_check(k.name() + " " + to_string(fs[i]) + " second moment", mc[i].second_moment, analytic, mc[i].std_error));
            Json e = to_json(mc[i]);
            e["kernel"] = k.name();
            e["analytic"] = analytic;
            e["z"] = (mc[i].second_moment - analytic) / mc[i].std_error;
            out.data["estimates"].push_back(e);
        }
    }
}

// ---- 7 ----
DecaySeries ladder_1d(const Kernel& k, Axis axis, int n_max) {
    DecaySeries s;
    for (int n = 0; n <= n_max; ++n) s.entries.emplace_back(n, integrated_weight_1d(k, axis, n));
    return s;
}

void criterion_regularization(CriterionResult& out, const VerifyOptions& opt) {
    const auto ks = kernels_or(opt, {"sqexp:ell=1", "matern:nu=2.5,ell=1"});
    out.data["kernels"] = Json::array();
    for (const auto& k : ks) {
        if (!check_a1(k).holds || !a2_holds(k)) {
            out.skipped = true;
            out.skip_reason = k.name() + ": conditions (A1) and (A2) are both required";
            return;
        }
    }
    const std::vector<Functional> fs1 = {Functional::hermite(1), Functional::hermite(2), Functional::hermite(3),
                                         Functional::hermite(4), Functional::sign(), Functional::abs_value(),
                                         Functional::indicator(0.5), Functional::sign(Axis::XDot),
                                         Functional::abs_value(Axis::XDot)};
    const std::vector<Functional> fs2 = {Functional::hermite2d(1, 1), Functional::hermite2d(2, 1),
                                         Functional::hermite2d(2, 2)};
    const int n1 = 40, n2 = 12;
    for (const auto& k : ks) {
        Json kj;
        kj["kernel"] = k.name();
        const auto s = regularization_exponent(k, Ladder::Hermite1D, 20, 200);
        out.checks.push_back(abs_check(k.name() + " 1-D ladder slope over [20, 200]", s.fitted_slope, -0.5, 0.05));
        const double r2 = r_derivative_at_zero(k, 2);
        const double laplace = 2.0 * std::sqrt(std::numbers::pi / (2.0 * std::abs(r2)));
        out.checks.push_back(rel_check(k.name() + " 1-D ladder constant vs Laplace oracle", s.pinned_constant, laplace, 0.10));
        const auto s2 = regularization_exponent(k, Ladder::Hermite2DDiagonal, 1, n2);
        out.checks.push_back(le_check(k.name() + " 2-D ladder slope over [1, 12]", s2.fitted_slope, -0.4));
        kj["ladder_1d"] = to_json(s, false);
        kj["ladder_2d"] = to_json(s2);

        DecaySeries l2;
        l2.entries.emplace_back(0, 1.0);
        for (int n = 1; n <= n2; ++n) l2.entries.emplace_back(n, integrated_weight_2d(k, (n + 1) / 2, n / 2));
        const double c_x = regularization_constant(ladder_1d(k, Axis::X, n1));
        const double c_xd = regularization_constant(ladder_1d(k, Axis::XDot, n1));
        const double c_2 = regularization_constant(l2);
        kj["c_hat"] = {{"x", c_x}, {"xdot", c_xd}, {"two_dimensional", c_2}};
        auto inequality = [&](const Functional& f, int n_max, double c_hat) {
            const auto sp = chaos_spectrum(f, k, n_max);
            for (double alpha : {-1.0, 0.0, 1.0}) {
                const double lhs = sobolev_norm(sp.integrated_norms, alpha + 0.5).value;
                const double rhs = c_hat * sobolev_norm(sp.point_norms, alpha).value;
                char a[16];
                std::snprintf(a, sizeof a, "%g", alpha);
                // 1e-12 relative slack for rounding in the two sums
                out.checks.push_back(le_check(k.name() + " " + to_string(f) + " alpha=" + a +
                                                  " ||int||_(alpha+1/2) <= C ||point||_alpha",
                                              lhs, rhs * (1.0 + 1e-12)));
            }
        };
        for (const auto& f : fs1) inequality(f, n1, f.axis == Axis::X ? c_x : c_xd);
        for (const auto& f : fs2) inequality(f, n2, c_2);
        out.data["kernels"].push_back(kj);
    }
}

// ---- 8 ----
void criterion_contraction(CriterionResult& out, const VerifyOptions& opt) {
    const auto ks = kernels_or(opt, {"sqexp:ell=1", "matern52:ell=1", "matern:nu=2.5,ell=1", "matern-half:m=3,ell=1",
                                     "gammaexp:gamma=2,ell=1", "rq:alpha=2,ell=1", "wendland:k=4",
                                     "periodic:T=2,ell=1"});
    out.data["kernels"] = Json::array();
    for (const auto& k : ks) {
        if (!a2_holds(k)) {
            out.skipped = true;
            out.skip_reason = k.name() + ": condition (A2) fails";
            return;
        }
    }
    for (const auto& k : ks) {
        const auto h = hs_expansion_derivatives(k);
        out.checks.push_back(abs_check(k.name() + " d/dt HS^2 at 0", h.first, 0.0, 1e-8));
        out.checks.push_back(lt_check(k.name() + " d2/dt2 HS^2 at 0", h.second, 0.0));
        const auto op = fit_quadratic_bound(k, BoundNorm::Operator);
        out.checks.push_back(flag_check(k.name() + " operator norm <= 1 - c t^2 on (0, c']", op.holds, true));
        out.checks.push_back(gt_check(k.name() + " operator-norm c_hat", op.c_hat, 0.0));
        const auto hs = fit_quadratic_bound(k, BoundNorm::NormalizedHs);
        Json kj;
        kj["kernel"] = k.name();
        kj["hs_expansion"] = to_json(h);
        kj["operator_bound"] = to_json(op);
        kj["normalized_hs_bound"] = to_json(hs);
        out.data["kernels"].push_back(kj);

        const double t = 0.3 * std::min(1.0, k.length_scale());
        const Eigen::Matrix2d a = a_matrix(k, t).m;
        const double op1 = operator_norm(a), hs1 = hs_sum_norm(a);
        double worst_op = 0.0, worst_hs = 0.0, worst_qf = 0.0;
        for (int n = 1; n <= 6; ++n) {
            const Eigen::MatrixXd p = kron_power(a, n);
            worst_op = std::max(worst_op, std::abs(operator_norm(p) - std::pow(op1, n)) / std::pow(op1, n));
            worst_hs = std::max(worst_hs, std::abs(hs_sum_norm(p) - std::pow(hs1, n)) / std::pow(hs1, n));
            for (int ia = 0; ia <= n; ++ia) {
                const auto c = hermite2d_coefficients(ia, n - ia);
                const double direct = c.entries.dot(p * c.entries);
                const double modes = kron_quadratic_form<double>(a, c.entries, n);
                worst_qf = std::max(worst_qf, std::abs(direct - modes) / std::max(1.0, std::abs(direct)));
            }
        }
        out.checks.push_back(le_check(k.name() + " ||A^(x)n||_op = ||A||_op^n, n <= 6 (relative)", worst_op, 1e-12));
        out.checks.push_back(le_check(k.name() + " ||A^(x)n||_HS = ||A||_HS^n, n <= 6 (relative)", worst_hs, 1e-12));
        out.checks.push_back(le_check(k.name() + " mode-product quadratic form vs explicit power", worst_qf, 1e-12));
    }
}

// ---- 9 ----
void criterion_crossings(CriterionResult& out, const VerifyOptions& opt) {
    const Kernel k = opt.kernel ? Kernel::parse(*opt.kernel) : Kernel::parse("sqexp:ell=1");
    if (!a2_holds(k)) {
        out.skipped = true;
        out.skip_reason = k.name() + ": condition (A2) fails";
        return;
    }
    const auto seed = criterion_seed(opt.seed, 9);
    const auto coarse = crossing_statistics(k, 0.0, opt.paths, opt.grid, seed, mc_options(opt));
    const auto fine = crossing_statistics(k, 0.0, opt.paths, 2 * opt.grid, seed, mc_options(opt));
    const double target = opt.kernel ? coarse.rice_mean : std::numbers::sqrt2 / std::numbers::pi;
    out.checks.push_back(se_check(k.name() + " mean crossings of level 0", coarse.mean, target, coarse.std_error));
    out.checks.push_back(lt_check(k.name() + " |relative change of second moment| under grid doubling",
                                  std::abs(fine.second_moment / coarse.second_moment - 1.0), 0.02));
    out.data["coarse"] = to_json(coarse);
    out.data["fine"] = to_json(fine);
}

// ---- 10 ----
void criterion_ms(CriterionResult& out, const VerifyOptions& opt) {
    const Kernel k = opt.kernel ? Kernel::parse(*opt.kernel) : Kernel::parse("sqexp:ell=1");
    const auto d = r_derivatives_at_zero(k);
    if (!d.r2_available) {
        out.skipped = true;
        out.skip_reason = k.name() + ": " + d.r2_reason;
        return;
    }
    const double h0 = 1e-2;
    const double g0 = ms_residual_analytic(k, h0);
    if (!opt.kernel) {
        out.checks.push_back(rel_check("g(0.01) vs 3 h^2", g0, 3.0 * h0 * h0, 0.05));
    } else if (d.r4_available) {
        out.checks.push_back(rel_check("g(0.01) vs r''''(0) h^2 / 4", g0, d.r4 * h0 * h0 / 4.0, 0.05));
    }
    const double g1 = ms_residual_analytic(k, 0.1), g2 = ms_residual_analytic(k, 0.05),
                 g3 = ms_residual_analytic(k, 0.025);
    out.checks.push_back(lt_check("g(0.05) < g(0.1)", g2, g1));
    out.checks.push_back(lt_check("g(0.025) < g(0.05)", g3, g2));
    const auto mc = ms_derivative_residual(k, 0.05, opt.paths, criterion_seed(opt.seed, 10), mc_options(opt));
    out.checks.push_back(se_check(k.name() + " Monte Carlo residual at h = 0.05", mc.mc_mean, mc.analytic, mc.mc_std_error));
    out.data["g"] = {{"0.01", g0}, {"0.025", g3}, {"0.05", g2}, {"0.1", g1}};
    out.data["monte_carlo"] = to_json(mc);
}

constexpr double kBudget[kCriteria + 1] = {0, 1, 10, 30, 10, 60, 300, 120, 10, 300, 120};

}  // namespace

bool CriterionResult::checks_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

const char* criterion_title(int id) {
    switch (id) {
        case 1: return "terminating Gauss hypergeometric identity";
        case 2: return "iterated integral closed form and decay";
        case 3: return "condition verdicts";
        case 4: return "derivative oracle concordance";
        case 5: return "moving-average kernel reconstruction";
        case 6: return "chaos norms against Monte Carlo";
        case 7: return "regularization rate";
        case 8: return "correlation matrix contraction";
        case 9: return "level crossings";
        case 10: return "mean-square derivative";
        default: throw DomainError("criterion_title: unknown criterion " + std::to_string(id));
    }
}

CriterionResult run_criterion(int id, const VerifyOptions& opt) {
    CriterionResult out;
    out.id = id;
    out.title = criterion_title(id);
    out.budget_seconds = kBudget[id];
    const auto start = Clock::now();
    switch (id) {
        case 1: criterion_hypergeometric(out); break;
        case 2: criterion_iterated_integral(out); break;
        case 3: criterion_conditions(out, opt); break;
        case 4: criterion_derivatives(out, opt); break;
        case 5: criterion_b_kernel(out, opt); break;
        case 6: criterion_chaos_mc(out, opt); break;
        case 7: criterion_regularization(out, opt); break;
        case 8: criterion_contraction(out, opt); break;
        case 9: criterion_crossings(out, opt); break;
        case 10: criterion_ms(out, opt); break;
    }
    out.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (out.skipped) out.checks.clear();
    return out;
}

std::vector<CriterionResult> run_suite(const VerifyOptions& opt) {
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, opt));
    return out;
}

Json to_json(const Check& c) {
    Json j;
    j["name"] = c.name;
    j["value"] = c.value;
    j["target"] = c.target;
    j["tolerance"] = c.tolerance;
    j["relation"] = c.relation;
    j["passed"] = c.passed;
    return j;
}

Json to_json(const CriterionResult& r) {
    Json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["skipped"] = r.skipped;
    if (r.skipped) j["skip_reason"] = r.skip_reason;
    j["checks_passed"] = r.skipped ? false : r.checks_passed();
    Json checks = Json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    j["data"] = r.data;
    j["timing"] = {{"seconds", r.seconds}, {"budget_seconds", r.budget_seconds}, {"within_budget", r.within_budget()}};
    j["passed"] = r.passed();
    return j;
}

Json verify_report_json(const std::vector<CriterionResult>& results, const RunConfig& config) {
    Json j = report_header("verify-report/1", config);
    int passed = 0, failed = 0, skipped = 0;
    Json rs = Json::array();
    for (const auto& r : results) {
        if (r.skipped) ++skipped;
        else if (r.passed()) ++passed;
        else ++failed;
        rs.push_back(to_json(r));
    }
    j["results"] = rs;
    j["summary"] = {{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
    return j;
}

}  // namespace gpreg
