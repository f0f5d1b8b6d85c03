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

#include "gpreg/chaos.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gpreg/conditions.hpp"
#include "gpreg/covstruct.hpp"
#include "gpreg/errors.hpp"
#include "gpreg/quadrature.hpp"
#include "gpreg/specfun.hpp"

namespace gpreg {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

int parse_int(std::string_view s, std::string_view whole) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || v < 0)
        throw ParseError("functional: bad order in '" + std::string(whole) + "'");
    return v;
}

double parse_real(std::string_view s, std::string_view whole) {
    const std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size() || !std::isfinite(v))
        throw ParseError("functional: bad level in '" + std::string(whole) + "'");
    return v;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double sigma_of(const Kernel& kernel) {
    const auto d = r_derivatives_at_zero(kernel);
    if (!d.r2_available) throw NotDifferentiable(kernel.name() + ": r''(0) unavailable: " + d.r2_reason);
    if (!(d.r2 < 0.0)) throw NotDifferentiable(kernel.name() + ": r''(0) is not negative");
    return std::sqrt(-d.r2);
}

void require_a2(const Kernel& kernel) {
    const auto d = r_derivatives_at_zero(kernel);
    if (!d.r2_available) throw NotDifferentiable(kernel.name() + ": r''(0) unavailable: " + d.r2_reason);
    if (!d.r4_available) throw NotDifferentiable(kernel.name() + ": r''''(0) unavailable: " + d.r4_reason);
    if (!(d.discriminant > 0.0)) throw ConditionFailure(kernel.name() + ": (A2) fails, discriminant not positive");
}

QuadOptions weight_options() {
    QuadOptions q;
    q.abs_tol = 1e-17;
    q.rel_tol = 1e-12;
    q.max_intervals = 4000;
    return q;
}

// 2 int_0^len (len - tau) rho(tau)^n
template <class R>
double triangle_weight(R&& rho, int n, double len) {
    auto f = [&](double tau) {
        const double v = rho(tau);
        return (len - tau) * std::pow(v, n);
    };
    return 2.0 * integrate(f, 0.0, len, weight_options()).value;
}

}  // namespace

Functional Functional::hermite(int m, Axis axis) {
    if (m < 0) throw DomainError("Hermite1D: negative order");
    Functional f;
    f.kind = Kind::Hermite1D;
    f.m = m;
    f.axis = axis;
    return f;
}

Functional Functional::hermite2d(int a, int b) {
    if (a < 0 || b < 0) throw DomainError("Hermite2D: negative order");
    Functional f;
    f.kind = Kind::Hermite2D;
    f.a = a;
    f.b = b;
    return f;
}

Functional Functional::sign(Axis axis) {
    Functional f;
    f.kind = Kind::Sign;
    f.axis = axis;
    return f;
}

Functional Functional::abs_value(Axis axis) {
    Functional f;
    f.kind = Kind::AbsValue;
    f.axis = axis;
    return f;
}

Functional Functional::indicator(double level, Axis axis) {
    if (!std::isfinite(level)) throw DomainError("Indicator: level must be finite");
    Functional f;
    f.kind = Kind::Indicator;
    f.level = level;
    f.axis = axis;
    return f;
}

Functional parse_functional(std::string_view text) {
    std::string_view body = text;
    Axis axis = Axis::X;
    bool axis_given = false;
    if (auto at = body.find('@'); at != std::string_view::npos) {
        const auto suffix = body.substr(at + 1);
        if (suffix == "x") {
            axis = Axis::X;
        } else if (suffix == "xdot") {
            axis = Axis::XDot;
        } else {
            throw ParseError("functional: unknown axis '" + std::string(suffix) + "'");
        }
        axis_given = true;
        body = body.substr(0, at);
    }
    std::string_view head = body, args;
    if (auto colon = body.find(':'); colon != std::string_view::npos) {
        head = body.substr(0, colon);
        args = body.substr(colon + 1);
        if (args.empty()) throw ParseError("functional: empty argument in '" + std::string(text) + "'");
    }
    if (head == "H") {
        if (args.empty()) throw ParseError("functional: H needs an order, e.g. H:3");
        return Functional::hermite(parse_int(args, text), axis);
    }
    if (head == "H2") {
        if (axis_given) throw ParseError("functional: H2 acts on (X, Xdot) and takes no axis suffix");
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw ParseError("functional: H2 needs two orders, e.g. H2:1,1");
        return Functional::hermite2d(parse_int(args.substr(0, comma), text), parse_int(args.substr(comma + 1), text));
    }
    if (head == "sign" || head == "abs") {
        if (!args.empty()) throw ParseError("functional: '" + std::string(head) + "' takes no argument");
        return head == "sign" ? Functional::sign(axis) : Functional::abs_value(axis);
    }
    if (head == "ind") return Functional::indicator(args.empty() ? 0.0 : parse_real(args, text), axis);
    throw ParseError("functional: unknown kind '" + std::string(head) + "'");
}

std::string to_string(const Functional& f) {
    std::string s;
    switch (f.kind) {
        case Functional::Kind::Hermite1D: s = "H:" + std::to_string(f.m); break;
        case Functional::Kind::Hermite2D: return "H2:" + std::to_string(f.a) + "," + std::to_string(f.b);
        case Functional::Kind::Sign: s = "sign"; break;
        case Functional::Kind::AbsValue: s = "abs"; break;
        case Functional::Kind::Indicator: s = "ind:" + format_real(f.level); break;
    }
    return s + (f.axis == Axis::X ? "@x" : "@xdot");
}

double evaluate(const Functional& f, double x, double xdot_scaled) {
    const double v = f.axis == Axis::X ? x : xdot_scaled;
    switch (f.kind) {
        case Functional::Kind::Hermite1D: return hermite(f.m, v);
        case Functional::Kind::Hermite2D: return hermite(f.a, x) * hermite(f.b, xdot_scaled);
        case Functional::Kind::Sign: return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
        case Functional::Kind::AbsValue: return std::abs(v);
        case Functional::Kind::Indicator: return v >= f.level ? 1.0 : 0.0;
    }
    return 0.0;
}

ScalarFunction scalar_function(const Functional& f) {
    ScalarFunction s;
    switch (f.kind) {
        case Functional::Kind::Hermite1D:
            s.kind = ScalarFunction::Kind::Hermite;
            s.m = f.m;
            break;
        case Functional::Kind::Sign: s.kind = ScalarFunction::Kind::Sign; break;
        case Functional::Kind::AbsValue: s.kind = ScalarFunction::Kind::AbsValue; break;
        case Functional::Kind::Indicator:
            s.kind = ScalarFunction::Kind::Indicator;
            s.level = f.level;
            break;
        case Functional::Kind::Hermite2D: throw DomainError("scalar_function: Hermite2D is two-dimensional");
    }
    const Functional copy = f;
    s.f = [copy](double v) { return evaluate(copy, v, v); };
    return s;
}

HermiteCoefficients hermite_coeffs_1d(const ScalarFunction& f, int n_max) {
    if (n_max < 0) throw DomainError("hermite_coeffs_1d: n_max must be nonnegative");
    HermiteCoefficients out;
    out.normalized.assign(n_max + 1, 0.0);
    const double phi0 = normal_pdf(0.0);
    switch (f.kind) {
        case ScalarFunction::Kind::Hermite:
            if (f.m <= n_max) out.normalized[f.m] = std::sqrt(factorial(f.m));
            out.second_moment = factorial(f.m);
            out.method = "orthogonality";
            break;
        case ScalarFunction::Kind::Sign:
            // int_x^inf h_n phi = h_{n-1}(x) phi(x) / sqrt(n), h_n = H_n / sqrt(n!)
            for (int n = 1; n <= n_max; n += 2)
                out.normalized[n] = 2.0 * hermite_normalized(n - 1, 0.0) * phi0 / std::sqrt(double(n));
            out.second_moment = 1.0;
            out.method = "exact half-line integrals";
            break;
        case ScalarFunction::Kind::Indicator: {
            const double pl = normal_pdf(f.level);
            out.normalized[0] = 1.0 - normal_cdf(f.level);
            for (int n = 1; n <= n_max; ++n)
                out.normalized[n] = hermite_normalized(n - 1, f.level) * pl / std::sqrt(double(n));
            out.second_moment = 1.0 - normal_cdf(f.level);
            out.method = "exact half-line integrals";
            break;
        }
        case ScalarFunction::Kind::AbsValue:
            // x h_n = sqrt(n+1) h_{n+1} + sqrt(n) h_{n-1}
            for (int n = 0; n <= n_max; n += 2) {
                const double lower = n >= 2 ? hermite_normalized(n - 2, 0.0) * phi0 / std::sqrt(n - 1.0) : 0.5;
                out.normalized[n] = 2.0 * (hermite_normalized(n, 0.0) * phi0 + std::sqrt(double(n)) * lower);
            }
            out.second_moment = 1.0;
            out.method = "exact half-line integrals";
            break;
        case ScalarFunction::Kind::Generic: {
            if (!f.f) throw DomainError("hermite_coeffs_1d: generic function is empty");
            auto project = [&](int nodes) {
                const auto rule = gauss_hermite(nodes);
                std::vector<double> c(n_max + 1, 0.0);
                for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
                    const double x = rule.nodes(i);
                    const double w = rule.weights(i) * f.f(x);
                    // normalized recurrence h_{n+1} = (x h_n - sqrt(n) h_{n-1}) / sqrt(n+1)
                    double hm = 0.0, h = 1.0;
                    for (int n = 0; n <= n_max; ++n) {
                        c[n] += w * h;
                        const double hp = (x * h - std::sqrt(double(n)) * hm) / std::sqrt(n + 1.0);
                        hm = h;
                        h = hp;
                    }
                }
                return c;
            };
            const int nodes = std::max(4 * n_max, 32);
            const auto c1 = project(nodes);
            const auto c2 = project(2 * nodes);
            out.max_change = 0.0;
            for (int n = 0; n <= n_max; ++n) out.max_change = std::max(out.max_change, std::abs(c2[n] - c1[n]));
            out.converged = out.max_change <= 1e-9;
            out.normalized = c2;
            out.nodes = 2 * nodes;
            out.second_moment = kNaN;
            out.method = "Gauss-Hermite";
            break;
        }
    }
    out.a.resize(n_max + 1);
    for (int n = 0; n <= n_max; ++n) out.a[n] = out.normalized[n] / std::sqrt(factorial(n));
    return out;
}

std::vector<double> point_chaos_norms(const Functional& f, const Kernel& kernel, int n_max) {
    if (n_max < 0) throw DomainError("point_chaos_norms: n_max must be nonnegative");
    if (f.two_dimensional()) require_a2(kernel);
    else if (f.axis == Axis::XDot) sigma_of(kernel);
    std::vector<double> out(n_max + 1, 0.0);
    if (f.kind == Functional::Kind::Hermite2D) {
        const int n = f.a + f.b;
        if (n <= n_max) out[n] = factorial(f.a) * factorial(f.b);
        return out;
    }
    const auto c = hermite_coeffs_1d(scalar_function(f), n_max);
    for (int n = 0; n <= n_max; ++n) out[n] = c.normalized[n] * c.normalized[n];
    return out;
}

double integrated_weight_1d(const Kernel& kernel, Axis axis, int n) {
    if (n < 0) throw DomainError("integrated_weight_1d: negative order");
    if (n == 0) return 1.0;
    if (axis == Axis::X) return triangle_weight([&](double t) { return r_eval(kernel, t); }, n, 1.0);
    const double s2 = sigma_of(kernel) * sigma_of(kernel);
    return triangle_weight([&](double t) { return t == 0.0 ? 1.0 : -r_derivative(kernel, 2, t) / s2; }, n, 1.0);
}

double integrated_weight_2d(const Kernel& kernel, int a, int b) {
    const int n = a + b;
    if (n > 12) throw DomainError("integrated_weight_2d: order above 12");
    require_a2(kernel);
    if (n == 0) return 1.0;
    const auto c = hermite2d_coefficients(a, b);
    auto f = [&](double tau) { return (1.0 - tau) * tensor_power_quadratic_form(a_matrix(kernel, tau), c); };
    const double v = 2.0 * factorial(n) * integrate(f, 0.0, 1.0, weight_options()).value;
    return v / (factorial(a) * factorial(b));
}

double subinterval_bound_1d(const Kernel& kernel, int n, int m) {
    if (m < 1) throw DomainError("subinterval_bound_1d: need at least one subinterval");
    if (n == 0) return 1.0;
    const double len = 1.0 / m;
    return double(m) * m * triangle_weight([&](double t) { return r_eval(kernel, t); }, n, len);
}

std::vector<double> integrated_chaos_norms(const Functional& f, const Kernel& kernel, int n_max) {
    auto point = point_chaos_norms(f, kernel, n_max);
    std::vector<double> out(n_max + 1, 0.0);
    if (f.kind == Functional::Kind::Hermite2D) {
        const int n = f.a + f.b;
        if (n <= n_max) {
            if (n > 12) throw DomainError("integrated_chaos_norms: two-dimensional order above 12");
            out[n] = point[n] * integrated_weight_2d(kernel, f.a, f.b);
        }
        return out;
    }
    for (int n = 0; n <= n_max; ++n)
        if (point[n] != 0.0) out[n] = point[n] * integrated_weight_1d(kernel, f.axis, n);
    return out;
}

ChaosSpectrum chaos_spectrum(const Functional& f, const Kernel& kernel, int n_max) {
    ChaosSpectrum s;
    s.functional = to_string(f);
    s.kernel = kernel.name();
    s.n_max = n_max;
    s.point_norms = point_chaos_norms(f, kernel, n_max);
    s.integrated_norms = integrated_chaos_norms(f, kernel, n_max);
    double total = 0.0;
    for (double v : s.point_norms) total += v;
    double full = 0.0;
    switch (f.kind) {
        case Functional::Kind::Hermite1D: full = factorial(f.m); break;
        case Functional::Kind::Hermite2D: full = factorial(f.a) * factorial(f.b); break;
        case Functional::Kind::Sign:
        case Functional::Kind::AbsValue: full = 1.0; break;
        case Functional::Kind::Indicator: full = 1.0 - normal_cdf(f.level); break;
    }
    // integrated norms are dominated order by order, so the point tail bounds both
    const double tail = full - total;
    s.truncation_tail_bound = tail > 1e-14 * full ? tail : 0.0;
    return s;
}

SobolevNorm sobolev_norm(const std::vector<double>& norm2, double alpha, double cauchy_tol) {
    SobolevNorm out;
    if (norm2.empty()) return out;
    const int top = int(norm2.size()) - 1;
    double total = 0.0, half = 0.0;
    for (int n = 0; n <= top; ++n) {
        if (norm2[n] < 0.0) throw DomainError("sobolev_norm: negative squared norm");
        total += std::pow(1.0 + n, alpha) * norm2[n];
        if (n == top / 2) half = total;
    }
    out.value = std::sqrt(total);
    out.tail_change = total > 0.0 ? (total - half) / total : 0.0;
    out.converged = top == 0 || out.tail_change <= cauchy_tol;
    return out;
}

DecaySeries regularization_exponent(const Kernel& kernel, Ladder ladder, int n_min, int n_max,
                                    bool enforce_conditions) {
    if (n_min < 0 || n_max < n_min) throw DomainError("regularization_exponent: bad n range");
    if (ladder == Ladder::Hermite2DDiagonal && n_max > 12)
        throw DomainError("regularization_exponent: two-dimensional ladder is capped at n = 12");
    if (enforce_conditions) {
        if (ladder == Ladder::Hermite1D) {
            if (!check_a1(kernel).holds) throw ConditionFailure(kernel.name() + ": (A1) fails");
        } else {
            require_a2(kernel);
        }
    }
    std::vector<std::pair<int, double>> entries;
    for (int n = n_min; n <= n_max; ++n) {
        const double rho = ladder == Ladder::Hermite1D ? integrated_weight_1d(kernel, Axis::X, n)
                                                       : integrated_weight_2d(kernel, (n + 1) / 2, n / 2);
        entries.emplace_back(n, rho);
    }
    const int lo = std::max(1, n_min);
    if (n_max - lo < 1) {
        DecaySeries s;
        s.entries = entries;
        return s;
    }
    auto s = fit_decay_exponent(entries, {lo, n_max});
    s.entries = entries;
    return s;
}

double regularization_constant(const DecaySeries& ratios) {
    double sup = 0.0;
    for (const auto& [n, rho] : ratios.entries) sup = std::max(sup, std::sqrt(1.0 + n) * rho);
    return std::sqrt(sup);
}

void write_spectrum_csv(std::ostream& os, const ChaosSpectrum& s) {
    os << "n,point_norm_sq,integrated_norm_sq,rho\n";
    char buf[160];
    for (size_t n = 0; n < s.point_norms.size(); ++n) {
        const double p = s.point_norms[n];
        const double q = n < s.integrated_norms.size() ? s.integrated_norms[n] : 0.0;
        if (p > 0.0) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", n, p, q, q / p);
        } else {
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,\n", n, p, q);
        }
        os << buf;
    }
}

}  // namespace gpreg
