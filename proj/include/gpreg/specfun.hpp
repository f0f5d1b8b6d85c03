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

#include <cmath>

namespace gpreg {

double gamma_ln(double x);
double beta(double a, double b);

// K_nu(x), x > 0. Half-integer orders use the finite sum.
double bessel_k(double nu, double x);
// exp(x) * K_nu(x)
double bessel_k_scaled(double nu, double x);
// Temme series / Steed continued fraction, never the finite sum.
double bessel_k_generic(double nu, double x);

struct TerminatingHypergeometricInput {
    double a;
    int b;  // termination order, b <= 0
    double c;
    double z;
};

// Sum is carried in double-double arithmetic.
double hyp2f1_terminating(const TerminatingHypergeometricInput& in);

inline double hyp2f1_terminating(double a, int b, double c, double z) {
    return hyp2f1_terminating(TerminatingHypergeometricInput{a, b, c, z});
}

// Probabilists' Hermite polynomial. T may be a scalar or an Eigen array.
template <class T>
T hermite(int n, const T& x) {
    T h0 = x * 0.0 + 1.0;
    if (n == 0) return h0;
    T h1 = x;
    for (int k = 1; k < n; ++k) {
        T h2 = x * h1 - double(k) * h0;
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

// H_n / sqrt(n!)
template <class T>
T hermite_normalized(int n, const T& x) {
    T h0 = x * 0.0 + 1.0;
    if (n == 0) return h0;
    T h1 = x;
    for (int k = 1; k < n; ++k) {
        T h2 = (x * h1 - std::sqrt(double(k)) * h0) / std::sqrt(double(k + 1));
        h0 = h1;
        h1 = h2;
    }
    return h1;
}

template <class T>
T pochhammer(const T& q, int k) {
    T p = q * 0.0 + 1.0;
    for (int i = 0; i < k; ++i) p = p * (q + double(i));
    return p;
}

// sqrt(pi/e) (n+2)^(n+3/2) / (n+3/2)^(n+1)
double stirling_ratio(double n);

double normal_pdf(double x);
double normal_cdf(double x);

}  // namespace gpreg
