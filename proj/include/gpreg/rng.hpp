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
#include <cstdint>
#include <utility>

namespace gpreg {

// Philox4x32-10 (Salmon et al. 2011), counter-based.
struct Philox4x32 {
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key);
};

// uniform on the midpoints of a 2^-52 lattice, strictly inside (0, 1)
double uniform_open(std::uint32_t hi, std::uint32_t lo);

// inverse standard normal CDF, relative accuracy about 1e-16
double normal_quantile(double p);

// Two independent standard normals for (seed, stream, index, channel), by inversion of one block.
std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint32_t index,
                                      std::uint32_t channel = 0);

// normal_pair for indices first, first + 1, ... (mod 2^32); out holds 2 count values
void normal_pairs(std::uint64_t seed, std::uint64_t stream, std::uint32_t first, int count, std::uint32_t channel,
                  double* out);

}  // namespace gpreg
