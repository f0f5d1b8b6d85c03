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

#include <ostream>
#include <utility>
#include <vector>

namespace gpreg {

// int int_{0 <= s < t <= c'}, 0 < c' <= c^(-1/2), (1 - c s^2)^n ds dt, reduced to int_0^{c'} (c' - s)(1 - c s^2)^n ds
double iter_integral_quadrature(double c, double c_prime, int n);

// c = c' = 1 only: (2F1(-1/2, -n-1; 1/2; 1) - 1) / (2(n+1))
double iter_integral_closed_form(int n);

// sqrt(pi) Gamma(n+2) / Gamma(n+3/2)
double gauss_theorem_value(int n);

struct DecaySeries {
    std::vector<std::pair<int, double>> entries;
    double fitted_slope = 0.0;
    double fitted_log_constant = 0.0;
    std::pair<int, int> fit_window{0, 0};
    double residual = 0.0;  // max |log value - fit|
    // constant C of C n^pinned_slope, geometric mean over the window
    double pinned_slope = -0.5;
    double pinned_constant = 0.0;
    int points = 0;
};

// Least squares on (log n, log value) over entries with n in [n_min, n_max];
// a window of {0, 0} means every entry.
DecaySeries fit_decay_exponent(std::vector<std::pair<int, double>> entries, std::pair<int, int> window = {0, 0},
                               double pinned_slope = -0.5);

// iter_integral_quadrature(c, c', n) for n in [n_min, n_max], fitted over the same range
DecaySeries iter_integral_series(double c, double c_prime, int n_min, int n_max);

// header "n,value"
void write_decay_csv(std::ostream& os, const DecaySeries& s);

}  // namespace gpreg
