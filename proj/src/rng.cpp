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

#include "gpreg/rng.hpp"

#include <algorithm>
#include <cmath>

namespace gpreg {

namespace {

constexpr std::uint32_t kM0 = 0xD2511F53u;
constexpr std::uint32_t kM1 = 0xCD9E8D57u;
constexpr std::uint32_t kW0 = 0x9E3779B9u;
constexpr std::uint32_t kW1 = 0xBB67AE85u;

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter c, Key k) {
    std::uint32_t c0 = c[0], c1 = c[1], c2 = c[2], c3 = c[3];
    std::uint32_t k0 = k[0], k1 = k[1];
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(kM0) * c0;
        const std::uint64_t p1 = std::uint64_t(kM1) * c2;
        const std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ c1 ^ k0;
        const std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ c3 ^ k1;
        c1 = std::uint32_t(p1);
        c3 = std::uint32_t(p0);
        c0 = n0;
        c2 = n2;
        k0 += kW0;
        k1 += kW1;
    }
    return {c0, c1, c2, c3};
}

double uniform_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t(hi) << 20) ^ (std::uint64_t(lo) >> 12);
    return (double(bits & ((std::uint64_t(1) << 52) - 1)) + 0.5) * 0x1p-52;
}

double normal_quantile(double p) {
    // Wichura, AS 241 (PPND16)
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        const double num =
            ((((((2509.0809287301226727 * r + 33430.575583588128105) * r + 67265.770927008700853) * r +
                45921.953931549871457) * r + 13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608;
        const double den =
            ((((((5226.495278852545925 * r + 28729.085735721942674) * r + 39307.89580009271061) * r +
                21213.794301586595867) * r + 5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0;
        return q * num / den;
    }
    double r = std::sqrt(-std::log(q < 0.0 ? p : 1.0 - p));
    double v;
    if (r <= 5.0) {
        r -= 1.6;
        const double num =
            ((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r + 0.24178072517745061177) * r +
                1.27045825245236838258) * r + 3.64784832476320460504) * r + 5.7694972214606914055) * r +
             4.6303378461565452959) * r + 1.42343711074968357734;
        const double den =
            ((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r + 0.0151986665636164571966) * r +
                0.14810397642748007459) * r + 0.68976733498510000455) * r + 1.6763848301838038494) * r +
             2.05319162663775882187) * r + 1.0;
        v = num / den;
    } else {
        r -= 5.0;
        const double num =
            ((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r + 0.0012426609473880784386) * r +
                0.026532189526576123093) * r + 0.29656057182850489123) * r + 1.7848265399172913358) * r +
             5.4637849111641143699) * r + 6.6579046435011037772;
        const double den =
            ((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r + 1.8463183175100546818e-5) * r +
                7.868691311456132591e-4) * r + 0.0148753612908506148525) * r + 0.13692988092273580531) * r +
             0.59983220655588793769) * r + 1.0;
        v = num / den;
    }
    return q < 0.0 ? -v : v;
}

std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint32_t index,
                                      std::uint32_t channel) {
    const Philox4x32::Key key = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
    const Philox4x32::Counter ctr = {index, channel, std::uint32_t(stream), std::uint32_t(stream >> 32)};
    const auto r = Philox4x32::block(ctr, key);
    return {normal_quantile(uniform_open(r[0], r[1])), normal_quantile(uniform_open(r[2], r[3]))};
}

void normal_pairs(std::uint64_t seed, std::uint64_t stream, std::uint32_t first, int count, std::uint32_t channel,
                  double* out) {
    constexpr int kLanes = 8;
    const std::uint32_t s0 = std::uint32_t(stream), s1 = std::uint32_t(stream >> 32);
    for (int base = 0; base < count; base += kLanes) {
        const int n = std::min(kLanes, count - base);
        std::uint32_t c0[kLanes], c1[kLanes], c2[kLanes], c3[kLanes];
        for (int l = 0; l < kLanes; ++l) {
            c0[l] = first + std::uint32_t(base + l);
            c1[l] = channel;
            c2[l] = s0;
            c3[l] = s1;
        }
        std::uint32_t k0 = std::uint32_t(seed), k1 = std::uint32_t(seed >> 32);
        for (int round = 0; round < 10; ++round) {
            for (int l = 0; l < kLanes; ++l) {
                const std::uint64_t p0 = std::uint64_t(kM0) * c0[l];
                const std::uint64_t p1 = std::uint64_t(kM1) * c2[l];
                const std::uint32_t n0 = std::uint32_t(p1 >> 32) ^ c1[l] ^ k0;
                const std::uint32_t n2 = std::uint32_t(p0 >> 32) ^ c3[l] ^ k1;
                c1[l] = std::uint32_t(p1);
                c3[l] = std::uint32_t(p0);
                c0[l] = n0;
                c2[l] = n2;
            }
            k0 += kW0;
            k1 += kW1;
        }
        for (int l = 0; l < n; ++l) {
            out[2 * (base + l)] = normal_quantile(uniform_open(c0[l], c1[l]));
            out[2 * (base + l) + 1] = normal_quantile(uniform_open(c2[l], c3[l]));
        }
    }
}

}  // namespace gpreg
