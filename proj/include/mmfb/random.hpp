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

#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mmfb
{

/// Mixes a master seed with a list of stream coordinates (trial index,
/// purpose tag, ...) into an independent 64-bit seed. Each coordinate
/// goes through a SplitMix64 finalizer so neighbouring coordinates
/// produce unrelated streams, and the result depends only on the values,
/// never on the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> coordinates);

/// Seeded pseudo-random stream used by every stochastic operation.
class RandomStream
{
  public:
    explicit RandomStream(std::uint64_t seed);

    /// Sub-stream for trial (or any other coordinate tuple) of a master seed.
    static RandomStream substream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> coordinates);

    double uniform(double lo, double hi);
    double standard_normal();
    /// Laplacian with zero mean and the given scale b (density exp(-|x|/b) / 2b).
    double laplacian(double scale);
    /// Circularly-symmetric complex normal CN(0, variance).
    std::complex<double> complex_normal(double variance = 1.0);
    int bit();

    std::mt19937_64 &engine() { return engine_; }

  private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace mmfb
