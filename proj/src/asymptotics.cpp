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

#include "gpreg/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <set>

#include "gpreg/errors.hpp"
#include "gpreg/quadrature.hpp"
#include "gpreg/specfun.hpp"

namespace gpreg {

double iter_integral_quadrature(double c, double c_prime, int n) {
    if (!(c > 0.0)) throw DomainError("iter_integral_quadrature: c must be positive");
    // c' = c^(-1/2) is admitted: the integrand still lies in [0, 1]
    if (!(c_prime > 0.0) || c_prime * std::sqrt(c) > 1.0)
        throw DomainError("iter_integral_quadrature: need 0 < c' <= c^(-1/2)");
    if (n < 0) throw DomainError("iter_integral_quadrature: n must be nonnegative");
    QuadOptions opt;
    opt.abs_tol = 1e-15;
    opt.rel_tol = 1e-14;
    auto f = [&](double s) { return (c_prime - s) * std::pow(1.0 - c * s * s, n); };
    return integrate(f, 0.0, c_prime, opt).value;
}

double iter_integral_closed_form(int n) {
    if (n < 0) throw DomainError("iter_integral_closed_form: n must be nonnegative");
    return (hyp2f1_terminating(-0.5, -n - 1, 0.5, 1.0) - 1.0) / (2.0 * (n + 1));
}

double gauss_theorem_value(int n) {
    if (n < 0) throw DomainError("gauss_theorem_value: n must be nonnegative");
    return std::sqrt(std::numbers::pi) * std::exp(gamma_ln(n + 2.0) - gamma_ln(n + 1.5));
}

DecaySeries fit_decay_exponent(std::vector<std::pair<int, double>> entries, std::pair<int, int> window,
                               double pinned_slope) {
    DecaySeries out;
    const bool all = window.first == 0 && window.second == 0;
    for (const auto& [n, v] : entries)
        if (!(v > 0.0)) throw DomainError("fit_decay_exponent: entries must be positive");
    std::vector<double> x, y;
    std::set<int> distinct;
    for (const auto& [n, v] : entries) {
        if (!all && (n < window.first || n > window.second)) continue;
        if (n <= 0) throw DomainError("fit_decay_exponent: n must be positive");
        x.push_back(std::log(double(n)));
        y.push_back(std::log(v));
        distinct.insert(n);
    }
    if (distinct.size() < 2) throw DomainError("fit_decay_exponent: degenerate fit (fewer than 2 distinct n)");
    const double m = double(x.size());
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    out.fitted_slope = sxy / sxx;
    out.fitted_log_constant = my - out.fitted_slope * mx;
    double res = 0.0, pinned = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        res = std::max(res, std::abs(y[i] - out.fitted_log_constant - out.fitted_slope * x[i]));
        pinned += y[i] - pinned_slope * x[i];
    }
    out.residual = res;
    out.pinned_slope = pinned_slope;
    out.pinned_constant = std::exp(pinned / m);
    out.points = int(x.size());
    out.fit_window = all ? std::make_pair(*distinct.begin(), *distinct.rbegin()) : window;
    std::sort(entries.begin(), entries.end());
    out.entries = std::move(entries);
    return out;
}

DecaySeries iter_integral_series(double c, double c_prime, int n_min, int n_max) {
    if (n_min < 1 || n_max < n_min) throw DomainError("iter_integral_series: need 1 <= n_min <= n_max");
    std::vector<std::pair<int, double>> e;
    for (int n = n_min; n <= n_max; ++n) e.emplace_back(n, iter_integral_quadrature(c, c_prime, n));
    return fit_decay_exponent(std::move(e), {n_min, n_max});
}

void write_decay_csv(std::ostream& os, const DecaySeries& s) {
    os << "n,value\n";
    char buf[64];
    for (const auto& [n, v] : s.entries) {
        std::snprintf(buf, sizeof buf, "%d,%.17g\n", n, v);
        os << buf;
    }
}

}  // namespace gpreg
