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

#include "mmfb/numerics.hpp"

#include <cstddef>

namespace mmfb
{

/// F = R T B with R = [rf_bar, rf_tilde] (unit-modulus entries), T = [I_S, I_S]^T
/// and B diagonal, real and non-negative. Realizable with S RF chains and two
/// phase shifters per antenna and RF chain.
struct HybridDecomposition
{
    ComplexMatrix baseband;   // S x S
    ComplexMatrix rf_bar;     // M x S
    ComplexMatrix rf_tilde;   // M x S

    /// Stacked M x 2S phase-shifter matrix [rf_bar, rf_tilde].
    ComplexMatrix rf() const;
};

/// B_ss = max_m |F_ms| / 2; the two phase shifters sit at angle(F_ms) +- acos(|F_ms| / (2 B_ss)).
/// An all-zero column gets B_ss = 0 and phase 0 on both shifters; a zero entry
/// in a non-zero column gets phase 0 and therefore antipodal shifters.
/// Throws std::invalid_argument on non-finite input.
HybridDecomposition decompose(const ComplexMatrix &F);

/// (rf_bar + rf_tilde) * baseband.
ComplexMatrix reconstruct(const HybridDecomposition &d);

/// Two phase shifters per antenna per RF chain: 2 M S.
constexpr std::size_t phase_shifter_count(std::size_t antennas, std::size_t streams)
{
    return 2 * antennas * streams;
}

} // namespace mmfb
