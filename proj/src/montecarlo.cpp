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

#include "gpreg/montecarlo.hpp"

#include <fftw3.h>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "gpreg/errors.hpp"
#include "gpreg/rng.hpp"

namespace gpreg {

namespace {

constexpr double kSkip = 1e-15;

struct Moments {
    double mean = 0.0;
    double mean_se = 0.0;
    double second = 0.0;
    double second_se = 0.0;
    double variance = 0.0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    const std::size_t n = v.size();
    if (n == 0) return m;
    m.mean = pairwise_sum(v) / double(n);
    std::vector<double> sq(n), dev(n), sqdev(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = v[i] * v[i];
    m.second = pairwise_sum(sq) / double(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - m.mean;
        dev[i] = d * d;
        const double e = sq[i] - m.second;
        sqdev[i] = e * e;
    }
    if (n > 1) {
        m.variance = pairwise_sum(dev) / double(n - 1);
        m.mean_se = std::sqrt(m.variance / double(n));
        m.second_se = std::sqrt(pairwise_sum(sqdev) / double(n - 1) / double(n));
    }
    return m;
}

double trapezoid(const std::vector<double>& y, double step) {
    if (y.size() < 2) return 0.0;
    std::vector<double> w(y);
    w.front() *= 0.5;
    w.back() *= 0.5;
    return pairwise_sum(w) * step;
}

double sigma_of(const Kernel& kernel) {
    const auto d = r_derivatives_at_zero(kernel);
    if (!d.r2_available) throw NotDifferentiable(kernel.name() + ": r''(0) unavailable: " + d.r2_reason);
    return std::sqrt(-d.r2);
}

}  // namespace

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

int default_workers() {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : int(n);
}

// 1 for x <= 0, 0 for x >= 1, smooth; value and first two derivatives
static void smooth_step(double x, double& w, double& w1, double& w2) {
    if (x <= 0.0 || x >= 1.0) {
        w = x <= 0.0 ? 1.0 : 0.0;
        w1 = w2 = 0.0;
        return;
    }
    // w = 1 / (1 + exp(g)), g = 1/(1-x) - 1/x
    const double g = 1.0 / (1.0 - x) - 1.0 / x;
    const double g1 = 1.0 / ((1.0 - x) * (1.0 - x)) + 1.0 / (x * x);
    const double g2 = 2.0 / ((1.0 - x) * (1.0 - x) * (1.0 - x)) - 2.0 / (x * x * x);
    w = g > 700.0 ? 0.0 : 1.0 / (1.0 + std::exp(g));
    const double v = w * (1.0 - w);
    w1 = -v * g1;
    w2 = -w1 * (1.0 - 2.0 * w) * g1 - v * g2;
}

CirculantEmbedding::CirculantEmbedding(const Kernel& kernel, int grid_points, const MonteCarloOptions& opt)
    : kernel_(kernel), grid_(grid_points), with_derivative_(opt.with_derivative) {
    if (grid_points < 2) throw DomainError("CirculantEmbedding: need at least 2 grid points");
    step_ = 1.0 / (grid_points - 1);
    const double r2 = with_derivative_ ? -sigma_of(kernel) * sigma_of(kernel) : 0.0;
    info_.grid_points = grid_points;
    Eigen::FFT<double> fft;
    int size = std::max(int(std::bit_ceil(unsigned(2 * (grid_points - 1)))), 1 << opt.min_size_log2);
    const int cap = 1 << opt.max_size_log2;

    struct Candidate {
        std::vector<std::array<double, 3>> eig;  // e1, e2, eigenvector angle
        double mx = 0.0, mn = 0.0, total = 0.0;
    };
    // lags up to 1 are taken from r as is; beyond that the tapered variant rolls r off to 0 at half the period
    auto build = [&](int m, bool tapered) {
        std::vector<double> cxx(m), cxd(m, 0.0), cdd(m, 0.0);
        const double t0 = 1.0, t1 = 0.5 * m * step_;
        for (int k = 0; k < m; ++k) {
            const double t = std::min(k, m - k) * step_;
            double w = 1.0, w1 = 0.0, w2 = 0.0;
            if (tapered) {
                smooth_step((t - t0) / (t1 - t0), w, w1, w2);
                w1 /= t1 - t0;
                w2 /= (t1 - t0) * (t1 - t0);
            }
            const double r = r_eval(kernel, t);
            cxx[k] = r * w;
            if (!with_derivative_) continue;
            const double d1 = k == 0 ? 0.0 : r_derivative(kernel, 1, t);
            const double d2 = k == 0 ? r2 : r_derivative(kernel, 2, t);
            cdd[k] = -(d2 * w + 2.0 * d1 * w1 + r * w2);
            if (k != 0 && 2 * k != m) cxd[k] = (k < m - k ? 1.0 : -1.0) * (d1 * w + r * w1);
        }
        std::vector<std::complex<double>> fxx, fxd, fdd;
        fft.fwd(fxx, cxx);
        if (with_derivative_) {
            fft.fwd(fxd, cxd);
            fft.fwd(fdd, cdd);
        }
        // per frequency T = [[a, q], [q, d]], q = Im fft(cxd); the Xdot channel carries a factor i
        Candidate c;
        c.eig.resize(m);
        for (int j = 0; j < m; ++j) {
            const double a = fxx[j].real();
            if (!with_derivative_) {
                c.eig[j] = {a, 0.0, 0.0};
                c.mx = std::max(c.mx, a);
                c.mn = std::min(c.mn, a);
                c.total += std::abs(a);
                continue;
            }
            const double q = fxd[j].imag(), d = fdd[j].real();
            const double half_tr = 0.5 * (a + d);
            const double rad = std::hypot(0.5 * (a - d), q);
            const double e1 = half_tr + rad, e2 = half_tr - rad;
            c.eig[j] = {e1, e2, 0.5 * std::atan2(2.0 * q, a - d)};
            c.mx = std::max(c.mx, e1);
            c.mn = std::min(c.mn, e2);
            c.total += std::abs(e1) + std::abs(e2);
        }
        return c;
    };

    for (int doublings = 0;; ++doublings, size *= 2) {
        if (size > cap) {
            throw EmbeddingFailure(kernel.name() + ": circulant embedding not nonnegative up to size " +
                                   std::to_string(cap) + " (min eigenvalue ratio " +
                                   std::to_string(info_.min_eigen_ratio) + ")");
        }
        const double half = 0.5 * size * step_;
        info_.size = size;
        info_.period = size * step_;
        info_.tail_r = std::abs(r_eval(kernel, half));
        info_.tail_dr = with_derivative_ ? std::abs(r_derivative(kernel, 1, half)) : 0.0;
        info_.doublings = doublings;
        const bool last = 2 * size > cap;
        Candidate cand = build(size, false);
        info_.tapered = false;
        info_.min_eigen_ratio = cand.mx > 0.0 ? cand.mn / cand.mx : -1.0;
        bool ok = info_.min_eigen_ratio >= -opt.clip_tol && (info_.tail_r <= opt.tail_tol || last);
        if (!ok && half > 1.5) {
            Candidate tap = build(size, true);
            const double ratio = tap.mx > 0.0 ? tap.mn / tap.mx : -1.0;
            if (ratio >= -opt.clip_tol) {
                cand = std::move(tap);
                info_.tapered = true;
                info_.min_eigen_ratio = ratio;
                ok = true;
            } else {
                info_.min_eigen_ratio = std::max(info_.min_eigen_ratio, ratio);
            }
        }
        if (!ok) continue;

        double dropped = 0.0;
        info_.clipped = 0;
        auto keep = [&](double e) {
            if (e < 0.0) {
                ++info_.clipped;
                dropped += -e;
                return 0.0;
            }
            return e <= kSkip * cand.mx ? 0.0 : std::sqrt(e / size);
        };
        factor_.assign(size, {0.0, 0.0, 0.0, 0.0});
        for (int j = 0; j < size; ++j) {
            const auto& e = cand.eig[j];
            if (!with_derivative_) {
                factor_[j] = {keep(e[0]), 0.0, 0.0, 0.0};
                continue;
            }
            const double s1 = keep(e[0]), s2 = keep(e[1]);
            const double c = std::cos(e[2]), s = std::sin(e[2]);
            factor_[j] = {c * s1, -s * s2, s * s1, c * s2};
        }
        info_.clipped_mass = cand.total > 0.0 ? dropped / cand.total : 0.0;
        // runs of active frequencies, split where the signed frequency wraps
        runs_.clear();
        for (int j = 0; j < size;) {
            auto active = [&](int i) { return factor_[i][0] != 0.0 || factor_[i][2] != 0.0; };
            if (!active(j)) {
                ++j;
                continue;
            }
            int e = j + 1;
            while (e < size && active(e) && e != size / 2 + 1) ++e;
            runs_.emplace_back(j, e);
            j = e;
        }
        std::vector<std::complex<double>> in(size), out(size);
        static std::mutex planner;
        std::lock_guard<std::mutex> lock(planner);
        // planned once here; fftw_execute_dft on other arrays is thread-safe
        plan_ = std::shared_ptr<void>(
            fftw_plan_dft_1d(size, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()),
                             FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED),
            [](void* p) { fftw_destroy_plan(static_cast<fftw_plan>(p)); });
        return;
    }
}

void CirculantEmbedding::sample_pair(std::uint64_t seed, std::int64_t pair, PathSample& even, PathSample& odd) const {
    const int size = int(factor_.size());
    auto plan = static_cast<fftw_plan>(plan_.get());
    auto backward = [plan](std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
        out.resize(in.size());
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
    };
    thread_local std::vector<std::complex<double>> y, yd, z;
    thread_local std::vector<double> buf;
    y.assign(size, {0.0, 0.0});
    if (with_derivative_) yd.assign(size, {0.0, 0.0});
    for (const auto& [j0, j1] : runs_) {
        const int js0 = j0 <= size / 2 ? j0 : j0 - size;
        buf.resize(2 * std::size_t(j1 - j0));
        normal_pairs(seed, std::uint64_t(pair), std::uint32_t(js0), j1 - j0, 0, buf.data());
        for (int j = j0; j < j1; ++j) {
            const auto& f = factor_[j];
            std::complex<double> w1(buf[2 * (j - j0)], buf[2 * (j - j0) + 1]);
            if (f[1] == 0.0 && f[3] == 0.0) {
                y[j] = f[0] * w1;
                if (with_derivative_) yd[j] = std::complex<double>(0.0, f[2]) * w1;
                continue;
            }
            const auto [c, d] = normal_pair(seed, std::uint64_t(pair), std::uint32_t(js0 + (j - j0)), 1);
            const std::complex<double> w2(c, d);
            y[j] = f[0] * w1 + f[1] * w2;
            yd[j] = std::complex<double>(0.0, 1.0) * (f[2] * w1 + f[3] * w2);
        }
    }
    auto fill = [&](PathSample& p, std::int64_t index) {
        p.grid_step = step_;
        p.length = grid_;
        p.seed = seed;
        p.path_index = index;
        p.x.resize(grid_);
        p.xdot.clear();
    };
    fill(even, 2 * pair);
    fill(odd, 2 * pair + 1);
    backward(y, z);
    for (int i = 0; i < grid_; ++i) {
        even.x[i] = z[i].real();
        odd.x[i] = z[i].imag();
    }
    if (!with_derivative_) return;
    backward(yd, z);
    even.xdot.resize(grid_);
    odd.xdot.resize(grid_);
    for (int i = 0; i < grid_; ++i) {
        even.xdot[i] = z[i].real();
        odd.xdot[i] = z[i].imag();
    }
}

PathSample CirculantEmbedding::sample(std::uint64_t seed, std::int64_t path_index) const {
    PathSample a, b;
    sample_pair(seed, path_index / 2, a, b);
    return path_index % 2 == 0 ? a : b;
}

void for_each_path(const CirculantEmbedding& emb, int n_paths, std::uint64_t seed, int workers,
                   const std::function<void(const PathSample&)>& fn) {
    if (n_paths <= 0) return;
    const std::int64_t pairs = (std::int64_t(n_paths) + 1) / 2;
    if (workers <= 0) workers = default_workers();
    workers = int(std::min<std::int64_t>(workers, pairs));
    auto run = [&](std::int64_t lo, std::int64_t hi) {
        PathSample a, b;
        for (std::int64_t p = lo; p < hi; ++p) {
            emb.sample_pair(seed, p, a, b);
            fn(a);
            if (2 * p + 1 < n_paths) fn(b);
        }
    };
    if (workers == 1) {
        run(0, pairs);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex mu;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = pairs * w / workers, hi = pairs * (w + 1) / workers;
        pool.emplace_back([&, lo, hi] {
            try {
                run(lo, hi);
            } catch (...) {
                std::lock_guard<std::mutex> g(mu);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<PathSample> sample_paths(const Kernel& kernel, int grid_points, int n_paths, std::uint64_t seed,
                                     const MonteCarloOptions& opt) {
    if (n_paths < 0) throw DomainError("sample_paths: negative path count");
    CirculantEmbedding emb(kernel, grid_points, opt);
    std::vector<PathSample> out(n_paths);
    for_each_path(emb, n_paths, seed, opt.workers, [&](const PathSample& p) { out[p.path_index] = p; });
    return out;
}

int count_crossings(const std::vector<double>& x, double level) {
    int prev = 0;
    int count = 0;
    for (double v : x) {
        const int s = v > level ? 1 : (v < level ? -1 : 0);
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

int count_crossings(const PathSample& path, double level) { return count_crossings(path.x, level); }

CrossingStats crossing_statistics(const Kernel& kernel, double level, int n_paths, int grid_points, std::uint64_t seed,
                                  const MonteCarloOptions& opt) {
    if (n_paths < 1) throw DomainError("crossing_statistics: need at least one path");
    CrossingStats s;
    s.level = level;
    s.n_paths = n_paths;
    s.grid_points = grid_points;
    s.rice_mean = sigma_of(kernel) / std::numbers::pi * std::exp(-0.5 * level * level);
    CirculantEmbedding emb(kernel, grid_points, opt);
    s.embedding = emb.info();
    std::vector<double> counts(n_paths);
    for_each_path(emb, n_paths, seed, opt.workers,
                  [&](const PathSample& p) { counts[p.path_index] = count_crossings(p, level); });
    const auto m = moments(counts);
    s.mean = m.mean;
    s.variance = m.variance;
    s.std_error = m.mean_se;
    s.second_moment = m.second;
    s.second_moment_std_error = m.second_se;
    return s;
}

std::vector<CrossingStats> crossing_refinement(const Kernel& kernel, double level, int n_paths, int grid_points,
                                               int levels, std::uint64_t seed, const MonteCarloOptions& opt) {
    std::vector<CrossingStats> out;
    int g = grid_points;
    for (int i = 0; i < levels; ++i, g = 2 * (g - 1) + 1) out.push_back(crossing_statistics(kernel, level, n_paths, g, seed, opt));
    return out;
}

std::vector<MomentEstimate> mc_integrated_functionals(const std::vector<Functional>& fs, const Kernel& kernel,
                                                      int n_paths, int grid_points, std::uint64_t seed,
                                                      const MonteCarloOptions& opt) {
    if (n_paths < 1) throw DomainError("mc_integrated_functional: need at least one path");
    bool deriv = false;
    for (const auto& f : fs) deriv = deriv || f.needs_derivative();
    MonteCarloOptions o = opt;
    o.with_derivative = deriv;
    CirculantEmbedding emb(kernel, grid_points, o);
    const double sigma = deriv ? sigma_of(kernel) : 1.0;
    std::vector<std::vector<double>> values(fs.size(), std::vector<double>(n_paths));
    for_each_path(emb, n_paths, seed, o.workers, [&](const PathSample& p) {
        std::vector<double> y(p.length);
        for (std::size_t k = 0; k < fs.size(); ++k) {
            for (int i = 0; i < p.length; ++i) y[i] = evaluate(fs[k], p.x[i], deriv ? p.xdot[i] / sigma : 0.0);
            values[k][p.path_index] = trapezoid(y, p.grid_step);
        }
    });
    std::vector<MomentEstimate> out;
    for (std::size_t k = 0; k < fs.size(); ++k) {
        const auto m = moments(values[k]);
        MomentEstimate e;
        e.functional = to_string(fs[k]);
        e.n_paths = n_paths;
        e.grid_points = grid_points;
        e.mean = m.mean;
        e.mean_std_error = m.mean_se;
        e.second_moment = m.second;
        e.std_error = m.second_se;
        e.embedding = emb.info();
        out.push_back(e);
    }
    return out;
}

MomentEstimate mc_integrated_functional(const Functional& f, const Kernel& kernel, int n_paths, int grid_points,
                                        std::uint64_t seed, const MonteCarloOptions& opt) {
    return mc_integrated_functionals({f}, kernel, n_paths, grid_points, seed, opt).front();
}

double ms_residual_analytic(const Kernel& kernel, double h) {
    if (!(h > 0.0)) throw DomainError("ms_derivative_residual: h must be positive");
    const double r2 = r_derivative_at_zero(kernel, 2);
    return (2.0 - 2.0 * r_eval(kernel, h)) / (h * h) + 2.0 * r_derivative(kernel, 1, h) / h - r2;
}

MsResidual ms_derivative_residual(const Kernel& kernel, double h, int n_paths, std::uint64_t seed,
                                  const MonteCarloOptions& opt) {
    MsResidual out;
    out.h = h;
    out.analytic = ms_residual_analytic(kernel, h);
    if (n_paths <= 0) return out;
    constexpr int lag = 100;
    const int intervals = int(std::lround(lag / h));
    if (intervals < lag) throw DomainError("ms_derivative_residual: h must be at most 1 for the Monte Carlo check");
    const double step = 1.0 / intervals;
    out.h = lag * step;
    out.analytic = ms_residual_analytic(kernel, out.h);
    out.grid_points = intervals + 1;
    out.n_paths = n_paths;
    MonteCarloOptions o = opt;
    o.with_derivative = true;
    CirculantEmbedding emb(kernel, out.grid_points, o);
    std::vector<double> per_path(n_paths);
    for_each_path(emb, n_paths, seed, o.workers, [&](const PathSample& p) {
        const int m = p.length - lag;
        std::vector<double> e(m);
        for (int i = 0; i < m; ++i) {
            const double d = (p.x[i + lag] - p.x[i]) / out.h - p.xdot[i];
            e[i] = d * d;
        }
        per_path[p.path_index] = pairwise_sum(e) / m;
    });
    const auto mo = moments(per_path);
    out.mc_mean = mo.mean;
    out.mc_std_error = mo.mean_se;
    return out;
}

void write_paths_binary(std::ostream& os, const std::vector<PathSample>& paths) {
    const char magic[4] = {'G', 'P', 'R', 'G'};
    const std::uint32_t version = 1;
    const double step = paths.empty() ? 0.0 : paths.front().grid_step;
    const std::uint64_t count = paths.size();
    const std::uint64_t length = paths.empty() ? 0 : std::uint64_t(paths.front().length);
    os.write(magic, 4);
    os.write(reinterpret_cast<const char*>(&version), sizeof version);
    os.write(reinterpret_cast<const char*>(&step), sizeof step);
    os.write(reinterpret_cast<const char*>(&count), sizeof count);
    os.write(reinterpret_cast<const char*>(&length), sizeof length);
    std::vector<double> zeros(length, 0.0);
    for (const auto& p : paths) {
        if (std::uint64_t(p.length) != length || p.grid_step != step)
            throw DomainError("write_paths_binary: paths must share one grid");
        os.write(reinterpret_cast<const char*>(p.x.data()), std::streamsize(length * sizeof(double)));
        const auto& xd = p.xdot.size() == length ? p.xdot : zeros;
        os.write(reinterpret_cast<const char*>(xd.data()), std::streamsize(length * sizeof(double)));
    }
}

std::vector<PathSample> read_paths_binary(std::istream& is) {
    char magic[4];
    std::uint32_t version = 0;
    double step = 0.0;
    std::uint64_t count = 0, length = 0;
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "GPRG", 4) != 0) throw ParseError("read_paths_binary: bad magic");
    is.read(reinterpret_cast<char*>(&version), sizeof version);
    is.read(reinterpret_cast<char*>(&step), sizeof step);
    is.read(reinterpret_cast<char*>(&count), sizeof count);
    is.read(reinterpret_cast<char*>(&length), sizeof length);
    if (!is || version != 1) throw ParseError("read_paths_binary: unsupported header");
    std::vector<PathSample> out(count);
    for (std::uint64_t k = 0; k < count; ++k) {
        auto& p = out[k];
        p.grid_step = step;
        p.length = int(length);
        p.path_index = std::int64_t(k);
        p.x.resize(length);
        p.xdot.resize(length);
        is.read(reinterpret_cast<char*>(p.x.data()), std::streamsize(length * sizeof(double)));
        is.read(reinterpret_cast<char*>(p.xdot.data()), std::streamsize(length * sizeof(double)));
        if (!is) throw ParseError("read_paths_binary: truncated file");
    }
    return out;
}

}  // namespace gpreg
