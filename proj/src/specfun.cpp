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

#include "gpreg/specfun.hpp"

#include <limits>
#include <numbers>
#include <string>

#include "gpreg/errors.hpp"

namespace gpreg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Double-double arithmetic (Dekker / Knuth error-free transforms).
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

inline DD two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

inline DD quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline DD operator+(DD x, DD y) {
    DD s = two_sum(x.hi, y.hi);
    DD t = two_sum(x.lo, y.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline DD operator-(DD x) { return {-x.hi, -x.lo}; }
inline DD operator-(DD x, DD y) { return x + (-y); }

inline DD operator*(DD x, DD y) {
    double p = x.hi * y.hi;
    double e = std::fma(x.hi, y.hi, -p);
    e += x.hi * y.lo + x.lo * y.hi;
    return quick_two_sum(p, e);
}

inline DD operator/(DD x, DD y) {
    double q1 = x.hi / y.hi;
    DD r = x - DD{q1} * y;
    double q2 = r.hi / y.hi;
    r = r - DD{q2} * y;
    double q3 = r.hi / y.hi;
    return quick_two_sum(q1, q2) + DD{q3};
}

bool is_half_integer(double nu, int& m) {
    double twice = 2.0 * nu;
    double r = std::round(twice);
    if (std::abs(twice - r) > 1e-14 || std::fmod(r, 2.0) == 0.0 || r > 61.0) return false;
    m = int((r - 1.0) / 2.0);
    return true;
}

// exp(x) K_{m+1/2}(x)
double half_integer_k_scaled(int m, double x) {
    double sum = 0.0;
    double term = 1.0;  // (m+k)! / (k! (m-k)!) (2x)^-k
    for (int k = 0; k <= m; ++k) {
        if (k > 0) term *= double(m + k) * double(m - k + 1) / (double(k) * 2.0 * x);
        sum += term;
    }
    return std::sqrt(kPi / (2.0 * x)) * sum;
}

// (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu)
double gam1(double mu) {
    if (std::abs(mu) < 0.1) {
        const double m2 = mu * mu;
        return -(0.5772156649015329 +
                 m2 * (-0.0420026350340952 +
                       m2 * (-0.0421977345555443 +
                             m2 * (0.0072189432466630 + m2 * (-0.0002152416741149 +
                                                              m2 * -0.0000201348547807)))));
    }
    return (1.0 / std::tgamma(1.0 - mu) - 1.0 / std::tgamma(1.0 + mu)) / (2.0 * mu);
}

// Temme series for x < 2, Steed's CF2 otherwise; returns exp(x) K_nu(x).
double temme_steed_scaled(double nu, double x) {
    const int nl = int(nu + 0.5);
    const double mu = nu - nl;
    const double mu2 = mu * mu;
    const double xi = 1.0 / x;
    const double xi2 = 2.0 * xi;
    double kmu = 0.0;
    double k1 = 0.0;
    if (x < 2.0) {
        const double x2 = 0.5 * x;
        const double pimu = kPi * mu;
        const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double d = -std::log(x2);
        double e = mu * d;
        const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
        const double gampl = 1.0 / std::tgamma(1.0 + mu);
        const double gammi = 1.0 / std::tgamma(1.0 - mu);
        const double g1 = gam1(mu);
        const double g2 = 0.5 * (gammi + gampl);
        double ff = fact * (g1 * std::cosh(e) + g2 * fact2 * d);
        double sum = ff;
        e = std::exp(e);
        double p = 0.5 * e / gampl;
        double q = 0.5 / (e * gammi);
        double c = 1.0;
        d = x2 * x2;
        double sum1 = p;
        for (int i = 1; i < 10000; ++i) {
            const double di = i;
            ff = (di * ff + p + q) / (di * di - mu2);
            c *= d / di;
            p /= di - mu;
            q /= di + mu;
            const double del = c * ff;
            sum += del;
            sum1 += c * (p - di * ff);
            if (std::abs(del) < std::abs(sum) * kEps) break;
        }
        const double scale = std::exp(x);
        kmu = sum * scale;
        k1 = sum1 * xi2 * scale;
    } else {
        double b = 2.0 * (1.0 + x);
        double d = 1.0 / b;
        double h = d;
        double delh = d;
        double q1 = 0.0;
        double q2 = 1.0;
        const double a1 = 0.25 - mu2;
        double q = a1;
        double c = a1;
        double a = -a1;
        double s = 1.0 + q * delh;
        for (int i = 2; i < 10000; ++i) {
            a -= 2.0 * (i - 1);
            c = -a * c / i;
            const double qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh = (b * d - 1.0) * delh;
            h += delh;
            const double dels = q * delh;
            s += dels;
            if (std::abs(dels / s) < kEps) break;
        }
        h = a1 * h;
        kmu = std::sqrt(kPi / (2.0 * x)) / s;
        k1 = kmu * (mu + x + 0.5 - h) * xi;
    }
    for (int i = 1; i <= nl; ++i) {
        const double next = (mu + i) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = next;
    }
    return kmu;
}

void require_bessel_domain(double nu, double x) {
    if (!(x > 0.0)) throw DomainError("bessel_k: x must be positive, got " + std::to_string(x));
    if (!(std::abs(nu) < 1e4)) throw DomainError("bessel_k: order out of range");
}

}  // namespace

double gamma_ln(double x) {
    if (!(x > 0.0)) throw DomainError("gamma_ln: x must be positive, got " + std::to_string(x));
    return std::lgamma(x);
}

double beta(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("beta: arguments must be positive");
    return std::exp(gamma_ln(a) + gamma_ln(b) - gamma_ln(a + b));
}

double bessel_k_scaled(double nu, double x) {
    require_bessel_domain(nu, x);
    nu = std::abs(nu);
    int m = 0;
    if (is_half_integer(nu, m)) return half_integer_k_scaled(m, x);
    return temme_steed_scaled(nu, x);
}

double bessel_k(double nu, double x) { return bessel_k_scaled(nu, x) * std::exp(-x); }

double bessel_k_generic(double nu, double x) {
    require_bessel_domain(nu, x);
    return temme_steed_scaled(std::abs(nu), x) * std::exp(-x);
}

double hyp2f1_terminating(const TerminatingHypergeometricInput& in) {
    if (in.b > 0) throw DomainError("hyp2f1_terminating: b must be a nonpositive integer");
    const int order = -in.b;
    for (int k = 0; k < order; ++k) {
        const double ck = in.c + k;
        if (ck == 0.0) throw DomainError("hyp2f1_terminating: c + k vanishes before termination");
    }
    DD term{1.0};
    DD sum{1.0};
    const DD z{in.z};
    for (int k = 0; k < order; ++k) {
        const DD num = DD{in.a} + DD{double(k)};
        const DD den = DD{in.c} + DD{double(k)};
        term = term * num * DD{double(in.b + k)} * z / (den * DD{double(k + 1)});
        sum = sum + term;
    }
    return sum.hi + sum.lo;
}

double stirling_ratio(double n) {
    const double log_r = 0.5 * (std::log(kPi) - 1.0) + (n + 1.5) * std::log(n + 2.0) -
                         (n + 1.0) * std::log(n + 1.5);
    return std::exp(log_r);
}

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace gpreg
