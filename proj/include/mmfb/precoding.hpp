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

enum class AllocationMode
{
    unitary,
    water_filling
};

struct PowerAllocation
{
    AllocationMode mode = AllocationMode::unitary;
    double total_power = 1.0;     // P
    double noise_variance = 1.0;  // sigma_n^2

    double snr() const { return total_power / noise_variance; }
};

/// M x S precoding matrix with unit Frobenius norm. The transmit power is
/// applied in the signal model (E[s s^H] = P I), never folded into F.
struct Precoder
{
    ComplexMatrix matrix;

    Eigen::Index antennas() const { return matrix.rows(); }
    Eigen::Index streams() const { return matrix.cols(); }
};

/// Power split over parallel eigenchannels with gains sigma_s^2 * snr.
/// Returns alpha_s^2 >= 0 with sum 1. Throws std::domain_error if every sigma is zero
/// and std::invalid_argument for non-positive snr or negative sigma.
RealVector water_fill(const RealVector &sigma, double snr);

/// Top-S right singular vectors of H scaled by alpha_s.
///
/// Each singular vector is rotated so its largest-magnitude entry is real and
/// non-negative. Throws std::invalid_argument if num_streams is zero or exceeds
/// min(rows, cols), and std::domain_error for an all-zero channel.
Precoder optimal_precoder(const ComplexMatrix &H, std::size_t num_streams, const PowerAllocation &alloc);

} // namespace mmfb
