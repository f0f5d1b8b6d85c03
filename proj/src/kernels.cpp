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

#include "gpreg/kernels.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gpreg/errors.hpp"
#include "gpreg/quadrature.hpp"
#include "gpreg/specfun.hpp"

namespace gpreg {

namespace {

constexpr double kPi = std::numbers::pi;

// ---- exact rationals for the Wendland construction ----

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 checked_mul(i128 a, i128 b) {
    i128 out;
    if (__builtin_mul_overflow(a, b, &out)) throw DomainError("wendland: rational overflow");
    return out;
}

i128 checked_add(i128 a, i128 b) {
    i128 out;
    if (__builtin_add_overflow(a, b, &out)) throw DomainError("wendland: rational overflow");
    return out;
}

struct Rational {
    i128 num = 0;
    i128 den = 1;

    Rational() = default;
    Rational(i128 n, i128 d = 1) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
    double to_double() const { return double(num) / double(den); }
};

Rational operator+(const Rational& a, const Rational& b) {
    i128 g = gcd128(a.den, b.den);
    i128 da = a.den / g;
    i128 db = b.den / g;
    return Rational(checked_add(checked_mul(a.num, db), checked_mul(b.num, da)), checked_mul(a.den, db));
}
Rational operator-(const Rational& a) { return Rational(-a.num, a.den); }
Rational operator*(const Rational& a, const Rational& b) {
    Rational x(a.num, b.den);
    Rational y(b.num, a.den);
    return Rational(checked_mul(x.num, y.num), checked_mul(x.den, y.den));
}

using RPoly = std::vector<Rational>;  // ascending powers

Rational eval(const RPoly& p, const Rational& x) {
    Rational acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

// (I p)(t) = int_t^1 s p(s) ds
RPoly wendland_step(const RPoly& p) {
    RPoly q(p.size() + 2);
    for (size_t j = 0; j < p.size(); ++j) q[j + 2] = p[j] * Rational(1, i128(j + 2));
    Rational at_one = eval(q, Rational(1));
    for (auto& c : q) c = -c;
    q[0] = q[0] + at_one;
    return q;
}

RPoly wendland_poly(int k, int n) {
    const int e = k + 1;
    RPoly p(e + 1);
    i128 binom = 1;
    for (int j = 0; j <= e; ++j) {
        p[j] = Rational((j % 2 ? -binom : binom));
        binom = binom * (e - j) / (j + 1);
    }
    for (int i = 0; i < n; ++i) p = wendland_step(p);
    return p;
}

// ---- real polynomials ----

using Poly = std::vector<double>;

double horner(const Poly& p, double x) {
    double acc = 0.0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly derivative(const Poly& p) {
    if (p.size() <= 1) return {0.0};
    Poly d(p.size() - 1);
    for (size_t j = 1; j < p.size(); ++j) d[j - 1] = double(j) * p[j];
    return d;
}

// (D - 1) p
Poly d_minus_one(const Poly& p) {
    Poly d = derivative(p);
    d.resize(std::max(d.size(), p.size()), 0.0);
    for (size_t j = 0; j < p.size(); ++j) d[j] -= p[j];
    return d;
}

double fmt_param(const std::string& key, const std::string& value) {
    double out = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), out);
    if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !std::isfinite(out))
        throw ParseError("kernel: parameter '" + key + "' has non-numeric value '" + value + "'");
    return out;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

int as_int(const std::string& key, double v) {
    if (v != std::floor(v) || std::abs(v) > 1e6)
        throw ParseError("kernel: parameter '" + key + "' must be an integer");
    return int(v);
}

}  // namespace

namespace detail {

struct KernelState {
    KernelSpec spec;
    // Matern family
    double gamma_m = 0.0;   // sqrt(2 nu) / ell
    double log_c = 0.0;     // log(2^(1-nu) / Gamma(nu))
    // MaternHalfInteger polynomials in s: P, (D-1)P, (D-1)^2 P, (D-1)^4 P
    Poly p0, p1, p2, p4;
    // Wendland (normalized so p(0) = 1) and rational coefficients
    Poly w0, w1, w2;
    double w_r2 = 0.0, w_r4 = 0.0;
    // closed-form b for Matern-type kernels
    double b_amp = 0.0;
    double b_nu = 0.0;      // order of the Bessel factor
    double b_gamma = 0.0;
    // numeric b
    std::once_flag grid_once;
    std::unique_ptr<SampledGrid> grid;
};

}  // namespace detail

std::string family_name(Family f) {
    switch (f) {
        case Family::SquaredExponential: return "sqexp";
        case Family::Matern: return "matern";
        case Family::MaternHalfInteger: return "matern-half";
        case Family::GammaExponential: return "gammaexp";
        case Family::RationalQuadratic: return "rq";
        case Family::Wendland: return "wendland";
        case Family::Cosine: return "cosine";
        case Family::Periodic: return "periodic";
    }
    return "unknown";
}

KernelSpec parse_kernel_spec(std::string_view text) {
    std::string s(text);
    auto colon = s.find(':');
    std::string fam = s.substr(0, colon);
    std::map<std::string, std::string> kv;
    if (colon != std::string::npos) {
        std::string rest = s.substr(colon + 1);
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw ParseError("kernel: empty parameter in '" + s + "'");
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0 || eq + 1 == item.size())
                throw ParseError("kernel: expected param=value, got '" + item + "'");
            auto key = item.substr(0, eq);
            if (key == "period") key = "T";
            if (kv.count(key)) throw ParseError("kernel: duplicate parameter '" + key + "'");
            kv[key] = item.substr(eq + 1);
        }
    }
    KernelSpec spec;
    std::vector<std::string> allowed;
    std::vector<std::string> required;
    if (fam == "sqexp") {
        spec.family = Family::SquaredExponential;
        allowed = {"ell"};
    } else if (fam == "matern") {
        spec.family = Family::Matern;
        allowed = {"nu", "ell"};
        required = {"nu"};
    } else if (fam == "matern12" || fam == "matern32" || fam == "matern52") {
        spec.family = Family::MaternHalfInteger;
        spec.m = fam[6] - '0' == 1 ? 0 : (fam[6] - '0' == 3 ? 1 : 2);
        allowed = {"ell"};
    } else if (fam == "matern-half") {
        spec.family = Family::MaternHalfInteger;
        allowed = {"m", "ell"};
        required = {"m"};
    } else if (fam == "gammaexp") {
        spec.family = Family::GammaExponential;
        allowed = {"gamma", "ell"};
        required = {"gamma"};
    } else if (fam == "rq") {
        spec.family = Family::RationalQuadratic;
        allowed = {"alpha", "ell"};
        required = {"alpha"};
    } else if (fam == "wendland") {
        spec.family = Family::Wendland;
        allowed = {"k"};
        required = {"k"};
    } else if (fam == "cosine") {
        spec.family = Family::Cosine;
        allowed = {"ell"};
    } else if (fam == "periodic") {
        spec.family = Family::Periodic;
        allowed = {"T", "ell"};
        required = {"T"};
    } else {
        throw ParseError("kernel: unknown family '" + fam + "'");
    }
    for (const auto& [key, value] : kv)
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw ParseError("kernel: family '" + fam + "' has no parameter '" + key + "'");
    for (const auto& key : required)
        if (!kv.count(key)) throw ParseError("kernel: family '" + fam + "' requires '" + key + "'");
    for (const auto& [key, value] : kv) {
        double v = fmt_param(key, value);
        if (key == "ell") spec.ell = v;
        else if (key == "nu") spec.nu = v;
        else if (key == "m") spec.m = as_int(key, v);
        else if (key == "gamma") spec.gamma = v;
        else if (key == "alpha") spec.alpha = v;
        else if (key == "k") spec.k = as_int(key, v);
        else if (key == "T") spec.period = v;
    }
    try {
        Kernel check(spec);
    } catch (const DomainError& e) {
        throw ParseError(e.what());
    }
    return spec;
}

std::string to_string(const KernelSpec& s) {
    switch (s.family) {
        case Family::SquaredExponential: return "sqexp:ell=" + num(s.ell);
        case Family::Matern: return "matern:nu=" + num(s.nu) + ",ell=" + num(s.ell);
        case Family::MaternHalfInteger: return "matern-half:m=" + std::to_string(s.m) + ",ell=" + num(s.ell);
        case Family::GammaExponential: return "gammaexp:gamma=" + num(s.gamma) + ",ell=" + num(s.ell);
        case Family::RationalQuadratic: return "rq:alpha=" + num(s.alpha) + ",ell=" + num(s.ell);
        case Family::Wendland: return "wendland:k=" + std::to_string(s.k);
        case Family::Cosine: return "cosine:ell=" + num(s.ell);
        case Family::Periodic: return "periodic:T=" + num(s.period) + ",ell=" + num(s.ell);
    }
    return "unknown";
}

namespace {

void set_matern_b(detail::KernelState& st, double nu, double ell) {
    const double gamma = std::sqrt(2.0 * nu) / ell;
    const double mu = nu + 0.5;
    const double log_cmu = std::lgamma(mu) - std::lgamma(mu - 0.5) - 0.5 * std::log(kPi) - std::log(gamma);
    const double mu_half = 0.5 * mu;
    st.b_gamma = gamma;
    st.b_nu = mu_half - 0.5;
    st.b_amp = std::exp(0.5 * (std::log(2.0 * kPi) + log_cmu) + std::log(gamma) - 0.5 * std::log(kPi) -
                        std::lgamma(mu_half));
}

}  // namespace

Kernel::Kernel(const KernelSpec& spec) : state_(std::make_shared<detail::KernelState>()) {
    auto& st = *state_;
    st.spec = spec;
    auto positive = [](double v, const char* what) {
        if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("kernel: ") + what + " must be positive");
    };
    switch (spec.family) {
        case Family::SquaredExponential:
            positive(spec.ell, "ell");
            break;
        case Family::Matern: {
            positive(spec.ell, "ell");
            positive(spec.nu, "nu");
            if (spec.nu > 50.0) throw DomainError("kernel: nu above 50 is not supported");
            st.gamma_m = std::sqrt(2.0 * spec.nu) / spec.ell;
            st.log_c = (1.0 - spec.nu) * std::log(2.0) - std::lgamma(spec.nu);
            set_matern_b(st, spec.nu, spec.ell);
            break;
        }
        case Family::MaternHalfInteger: {
            positive(spec.ell, "ell");
            if (spec.m < 0 || spec.m > 20) throw DomainError("kernel: m must be in [0, 20]");
            const int m = spec.m;
            st.gamma_m = std::sqrt(2.0 * m + 1.0) / spec.ell;
            // P(s) = (2^m m! / (2m)!) sum_k (m+k)! / (k! (m-k)!) 2^-k s^(m-k)
            Poly p(m + 1, 0.0);
            const double lead = std::exp(m * std::log(2.0) + std::lgamma(m + 1.0) - std::lgamma(2.0 * m + 1.0));
            for (int k = 0; k <= m; ++k) {
                const double w = std::exp(std::lgamma(m + k + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0)) *
                                 std::ldexp(1.0, -k);
                p[m - k] = lead * w;
            }
            p[0] = 1.0;
            st.p0 = p;
            st.p1 = d_minus_one(st.p0);
            st.p2 = d_minus_one(st.p1);
            st.p4 = d_minus_one(d_minus_one(st.p2));
            set_matern_b(st, m + 0.5, spec.ell);
            break;
        }
        case Family::GammaExponential:
            positive(spec.ell, "ell");
            if (!(spec.gamma > 0.0 && spec.gamma <= 2.0)) throw DomainError("kernel: gamma must be in (0, 2]");
            if (spec.gamma == 1.0) set_matern_b(st, 0.5, spec.ell);
            break;
        case Family::RationalQuadratic:
            positive(spec.ell, "ell");
            positive(spec.alpha, "alpha");
            break;
        case Family::Wendland: {
            if (spec.k < 1 || spec.k > 10) throw DomainError("kernel: k must be in [1, 10]");
            RPoly rp = wendland_poly(spec.k, spec.k);
            const Rational c0 = rp[0];
            Poly p(rp.size());
            for (size_t j = 0; j < rp.size(); ++j) p[j] = (rp[j] * Rational(c0.den, c0.num)).to_double();
            st.w0 = p;
            st.w1 = derivative(p);
            st.w2 = derivative(st.w1);
            st.w_r2 = (rp[2] * Rational(2) * Rational(c0.den, c0.num)).to_double();
            if (rp.size() > 4) st.w_r4 = (rp[4] * Rational(24) * Rational(c0.den, c0.num)).to_double();
            break;
        }
        case Family::Cosine:
            positive(spec.ell, "ell");
            break;
        case Family::Periodic:
            positive(spec.ell, "ell");
            positive(spec.period, "T");
            break;
    }
}

const KernelSpec& Kernel::spec() const { return state_->spec; }

double Kernel::length_scale() const {
    return spec().family == Family::Wendland ? 1.0 : spec().ell;
}

// ---- pointwise evaluation ----

namespace {

// C s^p K_q(s), evaluated through logs and the scaled Bessel function
double matern_term(double log_c, double s, double p, double q) {
    const double ks = bessel_k_generic(q, s) * std::exp(s);
    return std::exp(log_c + p * std::log(s) - s) * ks;
}

double wendland_at(const Poly& p, double t) { return t >= 1.0 ? 0.0 : horner(p, t); }

[[noreturn]] void not_diff(const Kernel& k, const std::string& what) {
    throw NotDifferentiable(k.name() + ": " + what);
}

}  // namespace

double r_eval(const Kernel& kernel, double t) {
    const auto& st = kernel.state();
    const auto& s = st.spec;
    const double at = std::abs(t);
    switch (s.family) {
        case Family::SquaredExponential: return std::exp(-at * at / (s.ell * s.ell));
        case Family::Matern: {
            if (at == 0.0) return 1.0;
            const double z = st.gamma_m * at;
            return matern_term(st.log_c, z, s.nu, s.nu);
        }
        case Family::MaternHalfInteger: {
            const double z = st.gamma_m * at;
            return horner(st.p0, z) * std::exp(-z);
        }
        case Family::GammaExponential: return std::exp(-std::pow(at / s.ell, s.gamma));
        case Family::RationalQuadratic:
            return std::exp(-s.alpha * std::log1p(at * at / (2.0 * s.alpha * s.ell * s.ell)));
        case Family::Wendland: return wendland_at(st.w0, at);
        case Family::Cosine: return std::cos(kPi * at / (s.ell * s.ell));
        case Family::Periodic: {
            const double sn = std::sin(kPi * at / s.period);
            return std::exp(-sn * sn / (s.ell * s.ell));
        }
    }
    return 0.0;
}

double r_derivative(const Kernel& kernel, int order, double t) {
    if (order == 0) return r_eval(kernel, t);
    if (order != 1 && order != 2) throw DomainError("r_derivative: order must be 0, 1 or 2");
    const auto& st = kernel.state();
    const auto& s = st.spec;
    const double at = std::abs(t);
    const double sg = t < 0.0 ? -1.0 : 1.0;
    if (at == 0.0) {
        if (order == 2) return r_derivative_at_zero(kernel, 2);
        // r'(0) = 0 whenever the one-sided slopes agree
        switch (s.family) {
            case Family::Matern:
                if (s.nu <= 0.5) not_diff(kernel, "r'(0) does not exist for nu <= 1/2");
                return 0.0;
            case Family::MaternHalfInteger:
                if (s.m == 0) not_diff(kernel, "r'(0) does not exist for m = 0");
                return 0.0;
            case Family::GammaExponential:
                if (s.gamma <= 1.0) not_diff(kernel, "r'(0) does not exist for gamma <= 1");
                return 0.0;
            default: return 0.0;
        }
    }
    switch (s.family) {
        case Family::SquaredExponential: {
            const double l2 = s.ell * s.ell;
            const double r = std::exp(-at * at / l2);
            return order == 1 ? -2.0 * t / l2 * r : (4.0 * t * t / (l2 * l2) - 2.0 / l2) * r;
        }
        case Family::Matern: {
            const double g = st.gamma_m;
            const double z = g * at;
            if (order == 1) return -sg * g * matern_term(st.log_c, z, s.nu, s.nu - 1.0);
            return -g * g * (matern_term(st.log_c, z, s.nu - 1.0, s.nu - 1.0) - matern_term(st.log_c, z, s.nu, s.nu - 2.0));
        }
        case Family::MaternHalfInteger: {
            const double g = st.gamma_m;
            const double z = g * at;
            const double e = std::exp(-z);
            return order == 1 ? sg * g * horner(st.p1, z) * e : g * g * horner(st.p2, z) * e;
        }
        case Family::GammaExponential: {
            const double u = std::pow(at / s.ell, s.gamma);
            const double r = std::exp(-u);
            const double u1 = s.gamma / s.ell * std::pow(at / s.ell, s.gamma - 1.0);
            if (order == 1) return -sg * u1 * r;
            const double u2 = s.gamma * (s.gamma - 1.0) / (s.ell * s.ell) * std::pow(at / s.ell, s.gamma - 2.0);
            return (u1 * u1 - u2) * r;
        }
        case Family::RationalQuadratic: {
            const double l2 = s.ell * s.ell;
            const double u = at * at / (2.0 * s.alpha * l2);
            const double base = std::exp(-(s.alpha + 1.0) * std::log1p(u));
            if (order == 1) return -t / l2 * base;
            return -base / l2 + (1.0 + 1.0 / s.alpha) * t * t / (l2 * l2) * base / (1.0 + u);
        }
        case Family::Wendland:
            return order == 1 ? sg * wendland_at(st.w1, at) : wendland_at(st.w2, at);
        case Family::Cosine: {
            const double a = kPi / (s.ell * s.ell);
            return order == 1 ? -a * std::sin(a * t) : -a * a * std::cos(a * t);
        }
        case Family::Periodic: {
            const double a = kPi / s.period;
            const double l2 = s.ell * s.ell;
            const double sn = std::sin(a * at);
            const double r = std::exp(-sn * sn / l2);
            const double g1 = -a * std::sin(2.0 * a * t) / l2;
            if (order == 1) return g1 * r;
            const double g2 = -2.0 * a * a * std::cos(2.0 * a * t) / l2;
            return (g2 + g1 * g1) * r;
        }
    }
    return 0.0;
}

// ---- derivatives at zero ----

DerivativesAtZero r_derivatives_at_zero(const Kernel& kernel) {
    const auto& st = kernel.state();
    const auto& s = st.spec;
    DerivativesAtZero d;
    auto set2 = [&](double v) { d.r2 = v; d.r2_available = true; };
    auto set4 = [&](double v) { d.r4 = v; d.r4_available = true; };
    switch (s.family) {
        case Family::SquaredExponential: {
            const double l2 = s.ell * s.ell;
            set2(-2.0 / l2);
            set4(12.0 / (l2 * l2));
            break;
        }
        case Family::Matern: {
            const double g2 = st.gamma_m * st.gamma_m;
            if (s.nu > 1.0) set2(-g2 / (2.0 * (s.nu - 1.0)));
            else d.r2_reason = "r''(0) requires nu > 1";
            if (s.nu > 2.0) set4(3.0 * g2 * g2 / (4.0 * (s.nu - 1.0) * (s.nu - 2.0)));
            else d.r4_reason = "r''''(0) requires nu > 2";
            break;
        }
        case Family::MaternHalfInteger: {
            const double g2 = st.gamma_m * st.gamma_m;
            if (s.m >= 1) set2(g2 * st.p2[0]);
            else d.r2_reason = "r''(0) requires m >= 1";
            if (s.m >= 2) set4(g2 * g2 * st.p4[0]);
            else d.r4_reason = "r''''(0) requires m >= 2";
            break;
        }
        case Family::GammaExponential: {
            if (s.gamma == 2.0) {
                const double l2 = s.ell * s.ell;
                set2(-2.0 / l2);
                set4(12.0 / (l2 * l2));
            } else {
                d.r2_reason = "r''(0) exists only for gamma = 2";
                d.r4_reason = "r''''(0) exists only for gamma = 2";
            }
            break;
        }
        case Family::RationalQuadratic: {
            const double l2 = s.ell * s.ell;
            set2(-1.0 / l2);
            set4(3.0 * (1.0 + 1.0 / s.alpha) / (l2 * l2));
            break;
        }
        case Family::Wendland:
            set2(st.w_r2);
            if (s.k >= 2) set4(st.w_r4);
            else d.r4_reason = "r''''(0) requires k >= 2";
            break;
        case Family::Cosine: {
            const double a = kPi / (s.ell * s.ell);
            const double a2 = a * a;
            set2(-a2);
            set4(a2 * a2);
            break;
        }
        case Family::Periodic: {
            const double a = kPi / s.period;
            const double a2 = a * a;
            const double l2 = s.ell * s.ell;
            set2(-2.0 * a2 / l2);
            set4(a2 * a2 * (8.0 / l2 + 12.0 / (l2 * l2)));
            break;
        }
    }
    if (d.r2_available && d.r4_available) d.discriminant = d.r4 - d.r2 * d.r2;
    return d;
}

double r_derivative_at_zero(const Kernel& kernel, int order) {
    auto d = r_derivatives_at_zero(kernel);
    if (order == 2) {
        if (!d.r2_available) not_diff(kernel, d.r2_reason);
        return d.r2;
    }
    if (order == 4) {
        if (!d.r4_available) not_diff(kernel, d.r4_reason);
        return d.r4;
    }
    throw DomainError("r_derivative_at_zero: order must be 2 or 4");
}

PrintedDerivatives printed_derivatives(const Kernel& kernel) {
    const auto& s = kernel.spec();
    PrintedDerivatives p;
    switch (s.family) {
        case Family::Matern: {
            const double nu = s.nu;
            const double g2 = 2.0 * nu / (s.ell * s.ell);
            if (nu > 1.0) p.r2 = -std::exp(std::lgamma(nu - 1.0) - std::lgamma(nu)) / 2.0 * g2;
            if (nu > 2.0) {
                p.r4 = g2 * g2 * std::exp(std::lgamma(nu - 2.0) - std::lgamma(nu)) * 0.75;
                p.discriminant = (2.0 * nu) * (2.0 * nu) / (4.0 * s.ell * s.ell) * (2.0 * nu - 3.0) /
                                 (nu * nu * (nu - 1.0));
            }
            break;
        }
        case Family::RationalQuadratic: {
            const double l4 = std::pow(s.ell, 4);
            p.r2 = -1.0 / (s.ell * s.ell);
            p.r4 = 3.0 / l4 * (1.0 + 1.0 / s.alpha);
            p.discriminant = (2.0 * s.alpha + 3.0) / l4;
            break;
        }
        case Family::Wendland: {
            const double k = s.k;
            if (s.k >= 4)
                p.discriminant = 18.0 * k * (3.0 * k + 1.0) * (2.0 * k * (k * (3.0 * k - 5.0) + 4.0) - 1.0) /
                                 ((2.0 * k - 1.0) * (2.0 * k - 1.0) * (2.0 * k - 3.0));
            break;
        }
        case Family::Cosine:
            p.discriminant = 0.0;
            break;
        case Family::Periodic: {
            const double tl = s.period * s.ell;
            p.discriminant = 8.0 * std::pow(kPi, 4) / std::pow(tl, 4) * (s.ell * s.ell + 1.0);
            break;
        }
        default: break;
    }
    return p;
}

std::optional<double> nonanalytic_power(const Kernel& kernel) {
    const auto& s = kernel.spec();
    switch (s.family) {
        case Family::Matern: return 2.0 * s.nu;
        case Family::MaternHalfInteger: return 2.0 * s.m + 1.0;
        case Family::Wendland: return 2.0 * s.k + 1.0;
        case Family::GammaExponential:
            if (s.gamma == 2.0) return std::nullopt;
            return s.gamma;
        default: return std::nullopt;
    }
}

// ---- finite-difference oracle ----

FdEstimate fd_derivative_at_zero(const Kernel& kernel, int order, const FdOptions& opt) {
    if (order < 1 || order > 4) throw DomainError("fd_derivative_at_zero: order must be 1..4");
    if (opt.levels < 2) throw DomainError("fd_derivative_at_zero: need at least two widths");
    auto r = [&](double t) { return r_eval(kernel, t); };
    const double eps = 1e-3 * kernel.length_scale();
    const double d2 = 2.0 * (r(eps) - 1.0) / (eps * eps);
    double scale = kernel.length_scale();
    if (std::isfinite(d2) && d2 < 0.0) scale = std::min(scale, 1.0 / std::sqrt(-d2));
    const double h0 = opt.h0_factor * scale;

    auto stencil = [&](double h) {
        switch (order) {
            case 1: return (r(h) - r(-h)) / (2.0 * h);
            case 2: return (r(h) - 2.0 * r(0.0) + r(-h)) / (h * h);
            case 3: return (r(2.0 * h) - 2.0 * r(h) + 2.0 * r(-h) - r(-2.0 * h)) / (2.0 * h * h * h);
            default: return (r(2.0 * h) - 4.0 * r(h) + 6.0 * r(0.0) - 4.0 * r(-h) + r(-2.0 * h)) / (h * h * h * h);
        }
    };

    // error exponents of the stencil: even powers, plus the shifted non-analytic series
    std::vector<double> exps;
    for (int j = 1; j <= 2 * opt.levels; ++j) exps.push_back(2.0 * j);
    if (auto p = nonanalytic_power(kernel); p && (order % 2 == 0)) {
        const double base = *p - order;
        if (base <= 0.0) not_diff(kernel, "finite-difference estimate diverges");
        for (int j = 0; j < 2 * opt.levels; ++j) exps.push_back(base + 2.0 * j);
    }
    std::sort(exps.begin(), exps.end());
    exps.erase(std::unique(exps.begin(), exps.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               exps.end());
    exps.resize(opt.levels - 1);

    FdEstimate out;
    std::vector<double> tab;
    for (int j = 0; j < opt.levels; ++j) {
        const double h = std::ldexp(h0, -j);
        out.widths.push_back(h);
        tab.push_back(stencil(h));
    }
    out.raw = tab;
    out.exponents = exps;
    double prev = tab.back();
    for (size_t i = 0; i < exps.size(); ++i) {
        const double f = std::exp2(exps[i]);
        std::vector<double> next;
        for (size_t j = 0; j + 1 < tab.size(); ++j) next.push_back((f * tab[j + 1] - tab[j]) / (f - 1.0));
        prev = tab.back();
        tab = next;
    }
    out.value = tab.front();
    out.error_estimate = std::abs(out.value - prev);
    return out;
}

// ---- spectral density and b ----

namespace {

double matern_spectral(double nu, double ell, double lambda) {
    const double g = std::sqrt(2.0 * nu) / ell;
    const double mu = nu + 0.5;
    return std::exp(std::lgamma(mu) - std::lgamma(mu - 0.5) - 0.5 * std::log(kPi) - std::log(g) -
                    mu * std::log1p(lambda * lambda / (g * g)));
}

double sqexp_spectral(double ell, double lambda) {
    return ell / (2.0 * std::sqrt(kPi)) * std::exp(-ell * ell * lambda * lambda / 4.0);
}

double rq_spectral(double alpha, double ell, double lambda) {
    const double c = std::sqrt(2.0 * alpha) * ell;
    const double z = c * std::abs(lambda);
    const double nu = alpha - 0.5;
    if (z == 0.0) {
        if (nu <= 0.0) return std::numeric_limits<double>::infinity();
        return c * std::exp(std::lgamma(nu) - std::lgamma(alpha)) / (2.0 * std::sqrt(kPi));
    }
    const double ks = bessel_k_scaled(std::abs(nu), z);
    return c / std::sqrt(kPi) * std::exp(-std::lgamma(alpha) + nu * std::log(z / 2.0) - z) * ks;
}

const SampledGrid& sampled_grid(const Kernel& kernel) {
    auto& st = const_cast<detail::KernelState&>(kernel.state());
    std::call_once(st.grid_once, [&] {
        const auto& s = st.spec;
        auto g = std::make_unique<SampledGrid>();
        const int n = 1 << 16;
        const double extent = 64.0 * kernel.length_scale();
        const double dx = 2.0 * extent / n;
        const double dl = 2.0 * kPi / (n * dx);
        g->n = n;
        g->dx = dx;
        g->extent = extent;
        g->dlambda = dl;
        g->lambda_max = dl * (n / 2);
        auto signed_index = [n](int j) { return j < n / 2 ? j : j - n; };

        std::vector<double> fp(n);
        if (s.family == Family::RationalQuadratic) {
            g->fprime_closed_form = true;
            for (int j = 0; j < n; ++j) fp[j] = rq_spectral(s.alpha, s.ell, signed_index(j) * dl);
        } else {
            std::vector<std::complex<double>> rin(n), rout;
            for (int j = 0; j < n; ++j) rin[j] = r_eval(kernel, signed_index(j) * dx);
            Eigen::FFT<double> fft;
            fft.fwd(rout, rin);
            for (int j = 0; j < n; ++j) fp[j] = dx / (2.0 * kPi) * rout[j].real();
        }
        for (int j = 0; j < n; ++j) {
            if (fp[j] < 0.0) {
                g->fprime_clipped_mass += -fp[j] * dl;
                fp[j] = 0.0;
            }
        }
        g->fprime.assign(fp.begin(), fp.begin() + n / 2 + 1);
        g->truncation_error = fp[n / 2] / fp[0];

        std::vector<std::complex<double>> bh(n), dbh(n), bout, dbout;
        for (int j = 0; j < n; ++j) {
            const double amp = std::sqrt(2.0 * kPi * fp[j]);
            bh[j] = amp;
            const double lam = (j == n / 2) ? 0.0 : signed_index(j) * dl;
            dbh[j] = std::complex<double>(0.0, lam * amp);
        }
        Eigen::FFT<double> fft;
        fft.inv(bout, bh);
        fft.inv(dbout, dbh);
        g->x.resize(n);
        g->b.resize(n);
        g->bprime.resize(n);
        for (int i = 0; i < n; ++i) {
            const int src = (i + n / 2) % n;  // ascending x from -extent
            g->x[i] = (i - n / 2) * dx;
            g->b[i] = bout[src].real() / dx;
            g->bprime[i] = dbout[src].real() / dx;
        }
        st.grid = std::move(g);
    });
    return *st.grid;
}

double grid_value(const SampledGrid& g, const std::vector<double>& y, double x) {
    const double u = (x + g.extent) / g.dx;
    if (u < 1.0 || u > g.n - 3) return 0.0;
    int i = int(std::floor(u));
    const double f = u - i;
    const double y0 = y[i - 1], y1 = y[i], y2 = y[i + 1], y3 = y[i + 2];
    return (-f * (f - 1.0) * (f - 2.0) / 6.0) * y0 + ((f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0) * y1 +
           (-(f + 1.0) * f * (f - 2.0) / 2.0) * y2 + ((f + 1.0) * f * (f - 1.0) / 6.0) * y3;
}

enum class BKind { SqExp, MaternType, Grid, None };

BKind b_kind(const KernelSpec& s) {
    switch (s.family) {
        case Family::SquaredExponential: return BKind::SqExp;
        case Family::Matern:
        case Family::MaternHalfInteger: return BKind::MaternType;
        case Family::GammaExponential:
            if (s.gamma == 2.0) return BKind::SqExp;
            if (s.gamma == 1.0) return BKind::MaternType;
            return BKind::Grid;
        case Family::RationalQuadratic: return s.alpha > 0.5 ? BKind::Grid : BKind::None;
        case Family::Wendland: return BKind::Grid;
        default: return BKind::None;
    }
}

}  // namespace

bool has_spectral_density(const Kernel& kernel) {
    return kernel.family() != Family::Cosine && kernel.family() != Family::Periodic;
}

double spectral_density(const Kernel& kernel, double lambda) {
    const auto& s = kernel.spec();
    switch (s.family) {
        case Family::SquaredExponential: return sqexp_spectral(s.ell, lambda);
        case Family::Matern: return matern_spectral(s.nu, s.ell, lambda);
        case Family::MaternHalfInteger: return matern_spectral(s.m + 0.5, s.ell, lambda);
        case Family::GammaExponential:
            if (s.gamma == 2.0) return sqexp_spectral(s.ell, lambda);
            if (s.gamma == 1.0) return s.ell / (kPi * (1.0 + s.ell * s.ell * lambda * lambda));
            break;
        case Family::RationalQuadratic: return rq_spectral(s.alpha, s.ell, lambda);
        case Family::Wendland: break;
        case Family::Cosine:
        case Family::Periodic:
            throw NoSpectralDensity(kernel.name() + ": r is not integrable, the spectrum is discrete");
    }
    const auto& g = sampled_grid(kernel);
    const double u = std::abs(lambda) / g.dlambda;
    if (u > double(g.fprime.size() - 1)) return 0.0;
    if (u < 1.0) {
        // even extension around 0
        const double y0 = g.fprime[1], y1 = g.fprime[0], y2 = g.fprime[1], y3 = g.fprime[2];
        const double f = u;
        return (-f * (f - 1.0) * (f - 2.0) / 6.0) * y0 + ((f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0) * y1 +
               (-(f + 1.0) * f * (f - 2.0) / 2.0) * y2 + ((f + 1.0) * f * (f - 1.0) / 6.0) * y3;
    }
    if (u > double(g.fprime.size() - 3)) return g.fprime[size_t(u)];
    int i = int(std::floor(u));
    const double f = u - i;
    const double y0 = g.fprime[i - 1], y1 = g.fprime[i], y2 = g.fprime[i + 1], y3 = g.fprime[i + 2];
    return std::max(0.0, (-f * (f - 1.0) * (f - 2.0) / 6.0) * y0 + ((f + 1.0) * (f - 1.0) * (f - 2.0) / 2.0) * y1 +
                             (-(f + 1.0) * f * (f - 2.0) / 2.0) * y2 + ((f + 1.0) * f * (f - 1.0) / 6.0) * y3);
}

bool has_b_representation(const Kernel& kernel) { return b_kind(kernel.spec()) != BKind::None; }

BKernel b_representation(const Kernel& kernel) {
    const auto& st = kernel.state();
    BKernel out;
    switch (b_kind(st.spec)) {
        case BKind::SqExp:
            out.normalization = std::sqrt(2.0) * std::pow(kPi, -0.25) / std::sqrt(st.spec.ell);
            out.description = "A exp(-2 x^2 / ell^2)";
            break;
        case BKind::MaternType:
            out.normalization = st.b_amp;
            out.description = "A (g|x|/2)^q K_q(g|x|), q = " + num(st.b_nu);
            break;
        case BKind::Grid:
            out.representation = BKernel::Representation::SampledGrid;
            out.grid = &sampled_grid(kernel);
            out.description = "inverse FFT of (2 pi F')^(1/2) on 2^16 points";
            break;
        case BKind::None:
            throw NoBRepresentation(kernel.name() + ": no square-integrable spectral density");
    }
    return out;
}

double b_kernel(const Kernel& kernel, double x) {
    const auto& st = kernel.state();
    const double ax = std::abs(x);
    switch (b_kind(st.spec)) {
        case BKind::SqExp: {
            const double l = st.spec.ell;
            return std::sqrt(2.0) * std::pow(kPi, -0.25) / std::sqrt(l) * std::exp(-2.0 * ax * ax / (l * l));
        }
        case BKind::MaternType: {
            const double z = st.b_gamma * ax;
            const double q = st.b_nu;
            if (z == 0.0) {
                if (q <= 0.0) return std::numeric_limits<double>::infinity();
                return st.b_amp * std::exp(std::lgamma(q)) / 2.0;
            }
            const double ks = bessel_k_scaled(std::abs(q), z);
            return st.b_amp * std::exp(q * std::log(z / 2.0) - z) * ks;
        }
        case BKind::Grid: {
            const auto& g = sampled_grid(kernel);
            return grid_value(g, g.b, ax);
        }
        case BKind::None: break;
    }
    throw NoBRepresentation(kernel.name() + ": no square-integrable spectral density");
}

double b_kernel_derivative(const Kernel& kernel, double x) {
    const auto& st = kernel.state();
    const double ax = std::abs(x);
    const double sg = x < 0.0 ? -1.0 : 1.0;
    switch (b_kind(st.spec)) {
        case BKind::SqExp: {
            const double l = st.spec.ell;
            return -4.0 * x / (l * l) * b_kernel(kernel, x);
        }
        case BKind::MaternType: {
            if (ax == 0.0) return 0.0;
            const double z = st.b_gamma * ax;
            const double q = st.b_nu;
            const double ks = bessel_k_scaled(std::abs(q - 1.0), z);
            return -sg * st.b_amp * st.b_gamma * std::exp(-q * std::log(2.0) + q * std::log(z) - z) * ks;
        }
        case BKind::Grid: {
            const auto& g = sampled_grid(kernel);
            return sg * grid_value(g, g.bprime, ax);
        }
        case BKind::None: break;
    }
    throw NoBRepresentation(kernel.name() + ": no square-integrable spectral density");
}

double reconstruct_r(const Kernel& kernel, double t) {
    auto rep = b_representation(kernel);
    t = std::abs(t);
    if (rep.representation == BKernel::Representation::SampledGrid) {
        const auto& g = *rep.grid;
        double sum = 0.0;
        for (int i = 0; i < g.n; ++i) sum += grid_value(g, g.b, g.x[i] + t) * g.b[i];
        return sum * g.dx;
    }
    auto f = [&](double s) { return b_kernel(kernel, s + t) * b_kernel(kernel, s); };
    QuadOptions opt;
    opt.abs_tol = 1e-13;
    opt.rel_tol = 1e-13;
    // symmetric about s = -t/2; singular points at s = 0 and s = -t
    double v = integrate_to_infinity(f, 0.0, opt).value;
    if (t > 0.0) v += integrate(f, -0.5 * t, 0.0, opt).value;
    return 2.0 * v;
}

double wendland_moment_exact(int k, int n) {
    if (k < 1 || n < 0) throw DomainError("wendland_moment_exact: need k >= 1, n >= 0");
    return wendland_poly(k, n)[0].to_double();
}

double wendland_moment_beta(int k, int n) {
    if (n < 1) throw DomainError("wendland_moment_beta: need n >= 1");
    return beta(2.0 * n, k + 2.0) / (std::ldexp(1.0, n - 1) * std::tgamma(double(n)));
}

}  // namespace gpreg
