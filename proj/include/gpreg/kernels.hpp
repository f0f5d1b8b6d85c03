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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gpreg {

enum class Family {
    SquaredExponential,
    Matern,
    MaternHalfInteger,
    GammaExponential,
    RationalQuadratic,
    Wendland,
    Cosine,
    Periodic,
};

std::string family_name(Family f);

struct KernelSpec {
    Family family = Family::SquaredExponential;
    double ell = 1.0;
    double nu = 0.5;     // Matern
    double gamma = 2.0;  // GammaExponential
    double alpha = 1.0;  // RationalQuadratic
    double period = 1.0; // Periodic
    int m = 0;           // MaternHalfInteger, nu = m + 1/2
    int k = 1;           // Wendland
};

// `family:param=value,...`; see README for the grammar.
KernelSpec parse_kernel_spec(std::string_view text);
std::string to_string(const KernelSpec& spec);

namespace detail {
struct KernelState;
}

// Immutable, cheap to copy; shares precomputed data between copies.
class Kernel {
public:
    explicit Kernel(const KernelSpec& spec);
    static Kernel parse(std::string_view text) { return Kernel(parse_kernel_spec(text)); }

    const KernelSpec& spec() const;
    Family family() const { return spec().family; }
    std::string name() const { return to_string(spec()); }
    // natural unit of time lag for the family
    double length_scale() const;

    const detail::KernelState& state() const { return *state_; }

private:
    std::shared_ptr<detail::KernelState> state_;
};

double r_eval(const Kernel& kernel, double t);

// order 0, 1 or 2 at lag t; NotDifferentiable where the derivative does not exist
double r_derivative(const Kernel& kernel, int order, double t);

struct DerivativesAtZero {
    double r2 = 0.0;
    double r4 = 0.0;
    double discriminant = 0.0;
    bool r2_available = false;
    bool r4_available = false;
    std::string r2_reason;
    std::string r4_reason;
};

DerivativesAtZero r_derivatives_at_zero(const Kernel& kernel);
// throws NotDifferentiable when unavailable; order 2 or 4
double r_derivative_at_zero(const Kernel& kernel, int order);

// Closed forms as printed in the source text, where they differ in form from ours.
struct PrintedDerivatives {
    std::optional<double> r2;
    std::optional<double> r4;
    std::optional<double> discriminant;
};
PrintedDerivatives printed_derivatives(const Kernel& kernel);

// r(t) = analytic + c |t|^p + ...; empty for analytic kernels
std::optional<double> nonanalytic_power(const Kernel& kernel);

struct FdOptions {
    double h0_factor = 0.45;  // h0 = factor * curvature scale
    int levels = 6;           // widths h0, h0/2, ..., h0/2^(levels-1)
};

struct FdEstimate {
    double value = 0.0;
    double error_estimate = 0.0;
    std::vector<double> widths;
    std::vector<double> raw;         // stencil values per width
    std::vector<double> exponents;   // eliminated error exponents
};

// Central differences at 0 with Richardson elimination; order 1..4.
FdEstimate fd_derivative_at_zero(const Kernel& kernel, int order, const FdOptions& opt = {});

// F'(lambda) with r(t) = int exp(i lambda t) F'(lambda) d lambda
double spectral_density(const Kernel& kernel, double lambda);
bool has_spectral_density(const Kernel& kernel);

struct SampledGrid {
    int n = 0;
    double dx = 0.0;
    double extent = 0.0;        // x in [-extent, extent)
    double dlambda = 0.0;
    double lambda_max = 0.0;
    std::vector<double> x;      // ascending
    std::vector<double> b;
    std::vector<double> bprime;
    std::vector<double> fprime; // F'(j dlambda), j = 0..n/2
    bool fprime_closed_form = false;
    double fprime_clipped_mass = 0.0;
    double truncation_error = 0.0;  // F'(lambda_max) / F'(0)
};

struct BKernel {
    enum class Representation { ClosedForm, SampledGrid };
    Representation representation = Representation::ClosedForm;
    double normalization = 1.0;  // closed-form amplitude
    const SampledGrid* grid = nullptr;
    std::string description;
};

bool has_b_representation(const Kernel& kernel);
BKernel b_representation(const Kernel& kernel);
// b is the inverse Fourier transform of (2 pi F')^(1/2); int b^2 = 1
double b_kernel(const Kernel& kernel, double x);
double b_kernel_derivative(const Kernel& kernel, double x);
double reconstruct_r(const Kernel& kernel, double t);

// (I^n phi_{k+1})(0) by exact rational arithmetic, and by the Beta-function formula
double wendland_moment_exact(int k, int n);
double wendland_moment_beta(int k, int n);

}  // namespace gpreg
