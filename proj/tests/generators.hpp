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
#include <cstdint>
#include <random>
#include <string>

// Seeded generators for property tests; every case is reproducible from the seed.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin() { return integer(0, 1) == 1; }

    // kernel strings from families that have r'' and r'''' at 0
    std::string smooth_kernel() {
        switch (integer(0, 4)) {
            case 0: return "sqexp:ell=" + num(uniform(0.3, 3.0));
            case 1: return "matern:nu=" + num(uniform(2.2, 6.0)) + ",ell=" + num(uniform(0.5, 2.0));
            case 2: return "matern-half:m=" + std::to_string(integer(2, 4)) + ",ell=" + num(uniform(0.5, 2.0));
            case 3: return "rq:alpha=" + num(uniform(0.5, 5.0)) + ",ell=" + num(uniform(0.5, 2.0));
            default: return "periodic:T=" + num(uniform(1.0, 4.0)) + ",ell=" + num(uniform(0.5, 2.0));
        }
    }

    static std::string num(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return buf;
    }

private:
    std::mt19937_64 rng_;
};
