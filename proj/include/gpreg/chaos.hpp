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

#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gpreg/asymptotics.hpp"
#include "gpreg/kernels.hpp"

namespace gpreg {

enum class Axis { X, XDot };

// Lambda(X_0, Xdot_0 / sigma) for the catalog functionals, sigma^2 = -r''(0).
struct Functional {
    enum class Kind { Hermite1D, Hermite2D, Sign, AbsValue, Indicator };
    Kind kind = Kind::Hermite1D;
    int m = 0;        // Hermite1D order
    int a = 0, b = 0;  // Hermite2D: H_a(X) H_b(Xdot / sigma)
    double level = 0.0;  // Indicator: 1{value >= level}
    Axis axis = Axis::X;

    static Functional hermite(int m, Axis axis = Axis::X);
    static Functional hermite2d(int a, int b);
    static Functional sign(Axis axis = Axis::X);
    static Functional abs_value(Axis axis = Axis::X);
    static Functional indicator(double level, Axis axis = Axis::X);

    bool two_dimensional() const { return kind == Kind::Hermite2D; }
    bool needs_derivative() const { return two_dimensional() || axis == Axis::XDot; }
};

// H:m, H2:a,b, sign, abs, ind:level, with optional @x (default) or @xdot
Functional parse_functional(std::string_view text);
std::string to_string(const Functional& f);

// pathwise value at (x, xdot / sigma)
double evaluate(const Functional& f, double x, double xdot_scaled);

struct ScalarFunction {
    enum class Kind { Hermite, Sign, AbsValue, Indicator, Generic };
    Kind kind = Kind::Generic;
    int m = 0;
    double level = 0.0;
    std::function<double(double)> f;
};

struct HermiteCoefficients {
    std::vector<double> a;           // E[f H_n] / n!
    std::vector<double> normalized;  // E[f H_n] / sqrt(n!), so n! a_n^2 = normalized_n^2
    double second_moment = 0.0;      // E[f^2] when known exactly, NaN otherwise
    bool converged = true;
    int nodes = 0;
    double max_change = 0.0;         // node-doubling change of the normalized coefficients
    std::string method;
};

HermiteCoefficients hermite_coeffs_1d(const ScalarFunction& f, int n_max);
ScalarFunction scalar_function(const Functional& f);

struct ChaosSpectrum {
    std::string functional;
    std::string kernel;
    int n_max = 0;
    std::vector<double> point_norms;       // index n
    std::vector<double> integrated_norms;
    double truncation_tail_bound = 0.0;    // L2 mass of the point spectrum beyond n_max
};

std::vector<double> point_chaos_norms(const Functional& f, const Kernel& kernel, int n_max);
std::vector<double> integrated_chaos_norms(const Functional& f, const Kernel& kernel, int n_max);
ChaosSpectrum chaos_spectrum(const Functional& f, const Kernel& kernel, int n_max);

// 2 int_0^1 (1 - tau) rho(tau)^n, with rho = r on X and -r''/sigma^2 on Xdot
double integrated_weight_1d(const Kernel& kernel, Axis axis, int n);
// 2 n! int_0^1 (1 - tau) <c, A(tau)^{(x) n} c> / (a! b!) for Hermite2D(a, b)
double integrated_weight_2d(const Kernel& kernel, int a, int b);
// Minkowski bound over m equal subintervals; equals the weight for m = 1
double subinterval_bound_1d(const Kernel& kernel, int n, int m);

struct SobolevNorm {
    double value = 0.0;
    bool converged = true;
    double tail_change = 0.0;  // (S_N - S_{N/2}) / S_N
};
// sqrt(sum (1+n)^alpha norm2[n]); divergence flagged when the upper half of the
// partial sums still moves by more than cauchy_tol relative
SobolevNorm sobolev_norm(const std::vector<double>& norm2, double alpha, double cauchy_tol = 0.05);

enum class Ladder { Hermite1D, Hermite2DDiagonal };

// rho_n over [n_min, n_max] and its log-log fit; rho_0 = 1 is never part of the fit
DecaySeries regularization_exponent(const Kernel& kernel, Ladder ladder, int n_min, int n_max,
                                    bool enforce_conditions = true);
// sqrt(sup_n (1+n)^(1/2) rho_n)
double regularization_constant(const DecaySeries& ratios);

// header "n,point_norm_sq,integrated_norm_sq,rho"
void write_spectrum_csv(std::ostream& os, const ChaosSpectrum& s);

}  // namespace gpreg
