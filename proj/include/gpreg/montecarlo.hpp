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

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "gpreg/chaos.hpp"
#include "gpreg/kernels.hpp"

namespace gpreg {

struct PathSample {
    double grid_step = 0.0;
    int length = 0;  // grid points on [0, 1]
    std::vector<double> x;
    std::vector<double> xdot;
    std::uint64_t seed = 0;
    std::int64_t path_index = 0;
};

struct EmbeddingInfo {
    int grid_points = 0;
    int size = 0;            // circulant size M
    double period = 0.0;     // M * grid_step
    double tail_r = 0.0;     // |r(period / 2)|
    double tail_dr = 0.0;    // |r'(period / 2)|, reported only
    double min_eigen_ratio = 0.0;
    int clipped = 0;         // eigenvalues set to zero
    double clipped_mass = 0.0;  // relative to the eigenvalue sum
    int doublings = 0;
    bool tapered = false;    // lags beyond 1 rolled off smoothly to 0 at period / 2
};

struct MonteCarloOptions {
    int workers = 0;          // 0: hardware concurrency
    bool with_derivative = true;
    int min_size_log2 = 0;
    int max_size_log2 = 22;
    double tail_tol = 1e-5;
    double clip_tol = 1e-8;
};

int default_workers();

// Circulant embedding of (X, Xdot) on t_i = i / (G - 1), i < G.
class CirculantEmbedding {
public:
    CirculantEmbedding(const Kernel& kernel, int grid_points, const MonteCarloOptions& opt = {});

    const EmbeddingInfo& info() const { return info_; }
    const Kernel& kernel() const { return kernel_; }
    double grid_step() const { return step_; }
    int grid_points() const { return grid_; }
    bool with_derivative() const { return with_derivative_; }

    // paths 2p and 2p+1 are the real and imaginary parts of one complex draw keyed by
    // (seed, p, signed frequency)
    void sample_pair(std::uint64_t seed, std::int64_t pair, PathSample& even, PathSample& odd) const;
    PathSample sample(std::uint64_t seed, std::int64_t path_index) const;

private:
    Kernel kernel_;
    int grid_ = 0;
    double step_ = 0.0;
    bool with_derivative_ = true;
    std::vector<std::array<double, 4>> factor_;  // R_j / sqrt(M), R_j R_j^T = T_j (row major)
    std::vector<std::pair<int, int>> runs_;       // active frequency ranges [j0, j1)
    std::shared_ptr<void> plan_;  // backward FFTW plan of size M
    EmbeddingInfo info_;
};

// consecutive paths of one seed, generated in parallel; deterministic per (seed, index)
std::vector<PathSample> sample_paths(const Kernel& kernel, int grid_points, int n_paths, std::uint64_t seed,
                                     const MonteCarloOptions& opt = {});

// callback(path) for every path; per-path values are reduced by the caller in index order
void for_each_path(const CirculantEmbedding& emb, int n_paths, std::uint64_t seed, int workers,
                   const std::function<void(const PathSample&)>& fn);

// sign changes of x - level; a value equal to the level takes the previous nonzero sign
// (leading ties take the first nonzero sign)
int count_crossings(const PathSample& path, double level);
int count_crossings(const std::vector<double>& x, double level);

struct CrossingStats {
    double level = 0.0;
    int n_paths = 0;
    int grid_points = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;
    double second_moment = 0.0;
    double second_moment_std_error = 0.0;
    double rice_mean = 0.0;
    EmbeddingInfo embedding;
};

CrossingStats crossing_statistics(const Kernel& kernel, double level, int n_paths, int grid_points, std::uint64_t seed,
                                  const MonteCarloOptions& opt = {});
// grid_points, 2 grid_points, ... (levels entries)
std::vector<CrossingStats> crossing_refinement(const Kernel& kernel, double level, int n_paths, int grid_points,
                                               int levels, std::uint64_t seed, const MonteCarloOptions& opt = {});

struct MomentEstimate {
    std::string functional;
    int n_paths = 0;
    int grid_points = 0;
    double mean = 0.0;
    double mean_std_error = 0.0;
    double second_moment = 0.0;
    double std_error = 0.0;  // of the second moment
    EmbeddingInfo embedding;
};

// trapezoidal int_0^1 Lambda(X_t, Xdot_t / sigma) dt per path
MomentEstimate mc_integrated_functional(const Functional& f, const Kernel& kernel, int n_paths, int grid_points,
                                        std::uint64_t seed, const MonteCarloOptions& opt = {});
// several functionals on the same paths
std::vector<MomentEstimate> mc_integrated_functionals(const std::vector<Functional>& fs, const Kernel& kernel,
                                                      int n_paths, int grid_points, std::uint64_t seed,
                                                      const MonteCarloOptions& opt = {});

struct MsResidual {
    double h = 0.0;
    double analytic = 0.0;
    double mc_mean = 0.0;
    double mc_std_error = 0.0;
    int n_paths = 0;
    int grid_points = 0;
};

// (2 - 2 r(h)) / h^2 + 2 r'(h) / h - r''(0)
double ms_residual_analytic(const Kernel& kernel, double h);
// analytic value, plus E[((X_{t+h} - X_t) / h - Xdot_t)^2] on a grid with step h / 100 when n_paths > 0
MsResidual ms_derivative_residual(const Kernel& kernel, double h, int n_paths = 0, std::uint64_t seed = 0,
                                  const MonteCarloOptions& opt = {});

// pairwise summation, fixed association for a given length
double pairwise_sum(const double* v, std::size_t n);
inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.data(), v.size()); }

// magic GPRG, u32 version, f64 grid_step, u64 paths, u64 length, then x and xdot per path
void write_paths_binary(std::ostream& os, const std::vector<PathSample>& paths);
std::vector<PathSample> read_paths_binary(std::istream& is);

}  // namespace gpreg
