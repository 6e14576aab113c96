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

#include "mmfb/feedback.hpp"
#include "mmfb/numerics.hpp"
#include "mmfb/random.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mmfb
{

struct LinkMetrics
{
    double snr_db = 0.0;
    double rate_bps_hz = 0.0;
    double ber = 0.0;
    std::size_t trials = 0;
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_sent = 0;
};

struct BitErrorCount
{
    std::uint64_t bit_errors = 0;
    std::uint64_t bits_sent = 0;

    double ber() const { return bits_sent == 0 ? 0.0 : static_cast<double>(bit_errors) / static_cast<double>(bits_sent); }
    BitErrorCount &operator+=(const BitErrorCount &o)
    {
        bit_errors += o.bit_errors;
        bits_sent += o.bits_sent;
        return *this;
    }
};

struct BeamPattern
{
    std::vector<double> angles;
    std::vector<double> gain;
    std::size_t gamma = 1;
};

/// log2 |I_N + snr H F F^H H^H| in bit/s/Hz.
/// Throws std::invalid_argument on a dimension mismatch, non-positive snr or
/// ||F||_F deviating from 1 by more than 1e-6.
double achievable_rate(const ComplexMatrix &H, const ComplexMatrix &F, double snr_linear);

/// Uncoded Gray-mapped QPSK over y = H F s + z with joint linear MMSE detection.
///
/// E[s s^H] = snr I and z ~ CN(0, I); the detector is
/// W = snr F^H H^H (snr H F F^H H^H + I)^-1 followed by per-stream slicing.
BitErrorCount ber_qpsk_mmse(const ComplexMatrix &H, const ComplexMatrix &F, double snr_linear,
                            std::size_t num_symbols, RandomStream &rng);

/// Normalized radiated power of basis element `center_index` over the codebook
/// sector, sampled on grid_size uniformly spaced angles (edges included).
/// The trapezoidal integral of the returned gains is 1.
BeamPattern beam_pattern(const BasisSpec &spec, std::size_t center_index, std::size_t grid_size = 2048);

/// Same as beam_pattern, with the basis element centred on an arbitrary angle.
BeamPattern beam_pattern_at(const BasisSpec &spec, double center_angle, std::size_t grid_size = 2048);

double trapezoid(const std::vector<double> &x, const std::vector<double> &y);

} // namespace mmfb
