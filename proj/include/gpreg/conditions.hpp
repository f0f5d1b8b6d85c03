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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gpreg/kernels.hpp"

namespace gpreg {

// Sum of nonnegative dyadic pieces with a ratio test on the tail.
struct DyadicSeries {
    bool finite = false;
    double value = 0.0;
    double remainder = 0.0;  // extrapolated tail beyond the last piece
    int pieces = 0;
    double last_ratio = 0.0;
    std::string model;
};

struct DyadicOptions {
    int max_pieces = 64;
    double converge_ratio = 0.97;
    double diverge_ratio = 0.99;
    double negligible = 1e-16;  // relative to the running sum
    double target = 1e-13;      // stop once the remainder is this small
};

// piece(j), j = 0, 1, ... are the contributions; toward_zero only changes the model text
template <class P>
DyadicSeries dyadic_series(P&& piece, bool toward_zero, const DyadicOptions& opt = {});

struct NormCheck {
    bool finite = false;
    double value = 0.0;
    double error = 0.0;
    std::string method;
};

struct A1Report {
    NormCheck b_in_L1, b_in_L2, b_in_Linf;
    NormCheck bprime_in_L1, bprime_in_L2, bprime_in_Linf;
    bool b_L2_positive = false;
    bool holds = false;
    std::string representation;
};

struct A2Report {
    double r2 = 0.0;
    double r4 = 0.0;
    double discriminant = 0.0;
    bool r2_available = false;
    bool r4_available = false;
    bool holds = false;
};

struct GemanReport {
    double delta = 0.0;
    std::optional<double> integral;
    bool holds = false;
    int refinements = 0;
    double last_increment = 0.0;
};

struct ConditionReport {
    std::string kernel;
    A1Report a1;
    A2Report a2;
    GemanReport geman;
    std::vector<std::string> notes;
};

A1Report check_a1(const Kernel& kernel, std::vector<std::string>* notes = nullptr);
A2Report check_a2(const Kernel& kernel, std::vector<std::string>* notes = nullptr);
// throws NotDifferentiable when r'' is unavailable
GemanReport check_geman(const Kernel& kernel, double delta);
double default_geman_delta(const Kernel& kernel);

ConditionReport check_conditions(const Kernel& kernel, std::optional<double> delta = std::nullopt);

// ---- implementation ----

template <class P>
DyadicSeries dyadic_series(P&& piece, bool toward_zero, const DyadicOptions& opt) {
    DyadicSeries out;
    double total = 0.0;
    double prev = -1.0;
    std::vector<double> ratios;
    int small = 0;
    for (int j = 0; j < opt.max_pieces; ++j) {
        const double c = piece(j);
        out.pieces = j + 1;
        if (!(c >= 0.0) || c == std::numeric_limits<double>::infinity()) {
            out.finite = false;
            out.value = std::numeric_limits<double>::infinity();
            out.model = "piece " + std::to_string(j) + " is not finite";
            return out;
        }
        total += c;
        if (prev > 0.0) ratios.push_back(c / prev);
        prev = c;
        if (j >= 2 && c <= opt.negligible * total) {
            if (++small >= 2) {
                out.finite = true;
                out.value = total;
                out.model = "negligible beyond piece " + std::to_string(j);
                return out;
            }
        } else {
            small = 0;
        }
        if (ratios.size() >= 4) {
            double hi = 0.0, lo = 1e300;
            for (size_t i = ratios.size() - 4; i < ratios.size(); ++i) {
                hi = std::max(hi, ratios[i]);
                lo = std::min(lo, ratios[i]);
            }
            out.last_ratio = ratios.back();
            if (hi <= opt.converge_ratio) {
                const double rem = c * hi / (1.0 - hi);
                if (rem <= opt.target * total || j + 1 == opt.max_pieces) {
                    out.finite = true;
                    out.value = total + rem;
                    out.remainder = rem;
                    if (hi < 0.05) {
                        out.model = "super-geometric decay";
                    } else {
                        const double e = -std::log2(hi);
                        // piece ratio 2^-(1+beta) toward 0, 2^(1-beta) toward infinity
                        const double beta = toward_zero ? e - 1.0 : 1.0 + e;
                        out.model = toward_zero ? "integrand ~ x^" + std::to_string(beta) + " at 0"
                                                : "integrand decays at least like x^-" + std::to_string(beta);
                    }
                    return out;
                }
            } else if (lo >= opt.diverge_ratio && j >= 8) {
                out.finite = false;
                out.value = std::numeric_limits<double>::infinity();
                out.model = "dyadic pieces do not decay (ratio " + std::to_string(lo) + ")";
                return out;
            }
        }
    }
    out.finite = false;
    out.value = std::numeric_limits<double>::infinity();
    out.model = "inconclusive after " + std::to_string(out.pieces) + " pieces";
    return out;
}

}  // namespace gpreg
