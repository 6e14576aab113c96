// SPDX-License-Identifier: Apache-2.0
//
// mmfb - feedback-aware hybrid precoding for mmWave massive MIMO
// Copyright (C) 2026 The mmfb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "mmfb/random.hpp"

#include <cmath>

namespace mmfb
{

namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> coordinates)
{
    std::uint64_t h = splitmix64(master_seed);
    for (std::uint64_t c : coordinates)
        h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

RandomStream::RandomStream(std::uint64_t seed)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    engine_.seed(seq);
}

RandomStream RandomStream::substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> coordinates)
{
    return RandomStream(derive_seed(master_seed, coordinates));
}

double RandomStream::uniform(double lo, double hi)
{
    // 53 random mantissa bits in [0, 1)
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

double RandomStream::standard_normal()
{
    return normal_(engine_);
}

double RandomStream::laplacian(double scale)
{
    // Inverse CDF on u in (-1/2, 1/2); the open interval keeps log() finite.
    double u = uniform(-0.5, 0.5);
    while (u == -0.5)
        u = uniform(-0.5, 0.5);
    const double sign = u < 0.0 ? -1.0 : 1.0;
    return -scale * sign * std::log1p(-2.0 * std::abs(u));
}

std::complex<double> RandomStream::complex_normal(double variance)
{
    const double s = std::sqrt(0.5 * variance);
    const double re = standard_normal();
    const double im = standard_normal();
    return {s * re, s * im};
}

int RandomStream::bit()
{
    return static_cast<int>(engine_() >> 63);
}

} // namespace mmfb
